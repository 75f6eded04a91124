//! One-parameter flows through circle homeomorphisms with a fixed point.

use std::sync::Arc;

use num_traits::Zero;

use super::lift::{canonicalize, CircleHomeo, LiftedMap};
use super::mobius::{Mat2, MobiusLift};
use super::pl::PlLift;
use crate::error::{Error, Result};
use crate::numeric::{int, to_f64, Rational};

const MAX_STEPS: usize = 200_000;

/// A fixed-point-free component `(lo, hi)` of a PL lift `G` together with its fundamental
/// domain between `anchor` and `G(anchor)`.
#[derive(Clone, Debug, PartialEq)]
struct Gap {
    lo: f64,
    hi: f64,
    anchor: f64,
    image: f64,
}

/// The flow `G^t` of a PL lift `G` having fixed points, built by affine interpolation on one
/// fundamental domain per gap of `Fix(G)` and extended by `G`-equivariance.
#[derive(Debug, PartialEq)]
pub struct PlFlow {
    generator: PlLift,
    inverse: PlLift,
    /// Start of the first fixed component; the flow is evaluated on `[origin, origin + 1)`.
    origin: f64,
    gaps: Vec<Gap>,
}

impl PlFlow {
    /// `g` must have a fixed point (displacement zero somewhere).
    pub fn new(g: PlLift) -> Result<Self> {
        let comps = g.solve_displacement(&Rational::zero());
        if comps.is_empty() {
            return Err(Error::NoFixedPoint);
        }
        let one = int(1);
        let origin = comps[0].start().clone();
        let mut gaps = Vec::new();
        for (i, c) in comps.iter().enumerate() {
            let lo = c.end().clone();
            let hi = match comps.get(i + 1) {
                Some(next) => next.start().clone(),
                None => &origin + &one,
            };
            if lo >= hi {
                continue;
            }
            let anchor = leftmost_breakpoint_in(&g, &lo, &hi)
                .ok_or_else(|| Error::Internal("gap without breakpoint".into()))?;
            let image = g.eval_exact(&anchor);
            gaps.push(Gap {
                lo: to_f64(&lo),
                hi: to_f64(&hi),
                anchor: to_f64(&anchor),
                image: to_f64(&image),
            });
        }
        let inverse = g.inverse();
        Ok(PlFlow {
            generator: g,
            inverse,
            origin: to_f64(&origin),
            gaps,
        })
    }

    pub fn generator(&self) -> &PlLift {
        &self.generator
    }

    pub fn eval(&self, t: f64, x: f64) -> f64 {
        if t == 0.0 {
            return x;
        }
        let k = (x - self.origin).floor();
        let y = x - k;
        let Some(gap) = self.gaps.iter().find(|g| g.lo < y && y < g.hi) else {
            return x;
        };
        gap_flow(gap, &self.generator, &self.inverse, t, y) + k
    }
}

fn leftmost_breakpoint_in(g: &PlLift, lo: &Rational, hi: &Rational) -> Option<Rational> {
    let mut best: Option<Rational> = None;
    for (x, _) in g.breakpoints() {
        for shift in [-1, 0, 1, 2] {
            let s = x + int(shift);
            if &s > lo && &s < hi && best.as_ref().is_none_or(|b| &s < b) {
                best = Some(s);
            }
        }
    }
    best
}

fn gap_flow(gap: &Gap, g: &PlLift, ginv: &PlLift, t: f64, x: f64) -> f64 {
    let width = gap.image - gap.anchor;
    // signed coordinate along the direction of motion; the domain is 0 <= u < |width|
    let dir = width.signum();
    let len = width.abs();
    let in_domain = |y: f64| {
        let u = dir * (y - gap.anchor);
        (0.0..len).contains(&u)
    };
    let mut y = x;
    let mut n: i64 = 0;
    let mut steps = 0;
    while !in_domain(y) && steps < MAX_STEPS {
        if dir * (y - gap.anchor) < 0.0 {
            y = g.eval(y);
            n += 1;
        } else {
            y = ginv.eval(y);
            n -= 1;
        }
        steps += 1;
    }
    if steps == MAX_STEPS {
        return x;
    }
    let phi = dir * (y - gap.anchor) / len - n as f64 + t;
    let m = phi.floor();
    let r = phi - m;
    let mut z = gap.anchor + dir * r * len;
    let m = m as i64;
    for _ in 0..m.unsigned_abs().min(MAX_STEPS as u64) {
        z = if m > 0 { g.eval(z) } else { ginv.eval(z) };
    }
    z.clamp(gap.lo, gap.hi)
}

/// The time-`t` map of a PL flow as a lift, possibly reflected and shifted by an integer.
#[derive(Clone, Debug)]
pub struct FlowLift {
    flow: Arc<PlFlow>,
    time: f64,
    shift: i64,
    reflected: bool,
}

impl PartialEq for FlowLift {
    fn eq(&self, other: &Self) -> bool {
        self.same_flow(other) && self.time == other.time && self.shift == other.shift
    }
}

impl FlowLift {
    pub fn new(flow: Arc<PlFlow>, time: f64) -> Self {
        FlowLift {
            flow,
            time,
            shift: 0,
            reflected: false,
        }
    }

    pub fn from_parts(flow: Arc<PlFlow>, time: f64, shift: i64, reflected: bool) -> Self {
        FlowLift {
            flow,
            time,
            shift,
            reflected,
        }
    }

    pub fn flow(&self) -> &Arc<PlFlow> {
        &self.flow
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn shift_amount(&self) -> i64 {
        self.shift
    }

    pub fn is_reflected(&self) -> bool {
        self.reflected
    }

    pub fn eval(&self, x: f64) -> f64 {
        let v = if self.reflected {
            -self.flow.eval(self.time, -x)
        } else {
            self.flow.eval(self.time, x)
        };
        v + self.shift as f64
    }

    pub fn same_flow(&self, other: &FlowLift) -> bool {
        (Arc::ptr_eq(&self.flow, &other.flow) || *self.flow == *other.flow) && self.reflected == other.reflected
    }

    pub fn add_time(&self, other: &FlowLift) -> FlowLift {
        FlowLift {
            time: self.time + other.time,
            shift: self.shift + other.shift,
            ..self.clone()
        }
    }

    pub fn inverse(&self) -> FlowLift {
        FlowLift {
            time: -self.time,
            shift: -self.shift,
            ..self.clone()
        }
    }

    pub fn times(&self, n: f64) -> FlowLift {
        FlowLift {
            time: self.time * n,
            shift: (self.shift as f64 * n) as i64,
            ..self.clone()
        }
    }

    pub fn shift(&self, k: i64) -> FlowLift {
        FlowLift {
            shift: self.shift + k,
            ..self.clone()
        }
    }

    pub fn reflect(&self) -> FlowLift {
        FlowLift {
            shift: -self.shift,
            reflected: !self.reflected,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum FlowGenerator {
    Identity,
    /// `P diag(e^{s}, e^{-s}) P⁻¹` with `s = t · log_l`.
    Hyperbolic { p: Mat2, log_l: f64, fixed: f64 },
    /// `I + t N`.
    Parabolic { n: Mat2, fixed: f64 },
    Pl(Arc<PlFlow>),
    /// Rescaled flow of a PL flow lift: time `t` is time `t · scale` of the base.
    PlScaled { base: FlowLift },
}

/// `t ↦ Flow(t)`, a one-parameter group with `Flow(1) = f`.
#[derive(Clone, Debug, PartialEq)]
pub struct Flow {
    generator: FlowGenerator,
}

impl Flow {
    pub fn identity() -> Self {
        Flow {
            generator: FlowGenerator::Identity,
        }
    }

    /// The time-`t` map, through the lift fixing a fixed point of the flow.
    pub fn lift_at(&self, t: f64) -> LiftedMap {
        match &self.generator {
            FlowGenerator::Identity => LiftedMap::identity(),
            FlowGenerator::Hyperbolic { p, log_l, fixed } => {
                let e = (t * log_l).exp();
                let m = *p * Mat2::new(e, 0.0, 0.0, 1.0 / e) * p.inverse();
                mobius_fixing(m, *fixed)
            }
            FlowGenerator::Parabolic { n, fixed } => {
                let m = Mat2::new(1.0 + t * n.a, t * n.b, t * n.c, 1.0 + t * n.d);
                mobius_fixing(m, *fixed)
            }
            FlowGenerator::Pl(f) => LiftedMap::Flow(FlowLift::new(f.clone(), t)),
            FlowGenerator::PlScaled { base } => LiftedMap::Flow(FlowLift {
                time: base.time * t,
                shift: 0,
                ..base.clone()
            }),
        }
    }

    pub fn at(&self, t: f64) -> CircleHomeo {
        canonicalize(&self.lift_at(t))
    }

    pub fn is_mobius(&self) -> bool {
        matches!(
            self.generator,
            FlowGenerator::Hyperbolic { .. } | FlowGenerator::Parabolic { .. }
        )
    }
}

fn mobius_fixing(m: Mat2, fixed: f64) -> LiftedMap {
    let l = MobiusLift::through(m, 0.0);
    let k = (l.eval(fixed) - fixed).round() as i64;
    LiftedMap::Mobius(l.shift(-k))
}

/// A one-parameter group through `f`. Requires a fixed point, or a non-elliptic Möbius map.
pub fn one_parameter_flow(f: &CircleHomeo) -> Result<Flow> {
    match f.lift() {
        LiftedMap::Rotation(t) => {
            if t.is_zero() {
                Ok(Flow::identity())
            } else {
                Err(Error::NoFixedPoint)
            }
        }
        LiftedMap::Pl(p) => {
            let (lo, hi) = p.displacement_range();
            let k = hi.floor();
            if k < lo {
                return Err(Error::NoFixedPoint);
            }
            let g = p.shift(-crate::numeric::floor_i64(&k));
            Ok(Flow {
                generator: FlowGenerator::Pl(Arc::new(PlFlow::new(g)?)),
            })
        }
        LiftedMap::Mobius(m) => mobius_flow(m.matrix()),
        LiftedMap::Flow(fl) => Ok(Flow {
            generator: FlowGenerator::PlScaled {
                base: FlowLift {
                    shift: 0,
                    ..fl.clone()
                },
            },
        }),
        LiftedMap::Composite(_) => Err(Error::UnsupportedKind("composite")),
    }
}

fn mobius_flow(m: &Mat2) -> Result<Flow> {
    let tr = m.trace();
    let s = if tr >= 0.0 { 1.0 } else { -1.0 };
    let a = m.scale(s);
    if a.distance(&Mat2::IDENTITY) < 1e-12 {
        return Ok(Flow::identity());
    }
    let tr = a.trace();
    if tr > 2.0 + 1e-12 {
        let disc = (tr * tr - 4.0).sqrt();
        let big = (tr + disc) / 2.0;
        let v1 = unit(a.eigenvector(big));
        let v2 = unit(a.eigenvector(1.0 / big));
        let mut p = Mat2::new(v1.0, v2.0, v1.1, v2.1);
        let det = p.det();
        if det < 0.0 {
            p = Mat2::new(v1.0, -v2.0, v1.1, -v2.1);
        }
        let p = p.scale(1.0 / p.det().abs().sqrt());
        Ok(Flow {
            generator: FlowGenerator::Hyperbolic {
                p,
                log_l: big.ln(),
                fixed: Mat2::angle_of(v1),
            },
        })
    } else if tr >= 2.0 - 1e-12 {
        let n = Mat2::new(a.a - 1.0, a.b, a.c, a.d - 1.0);
        // the kernel of the nilpotent part is the fixed direction
        let v = if n.a.abs() + n.b.abs() > n.c.abs() + n.d.abs() {
            (n.b, -n.a)
        } else {
            (n.d, -n.c)
        };
        Ok(Flow {
            generator: FlowGenerator::Parabolic {
                n,
                fixed: Mat2::angle_of(v),
            },
        })
    } else {
        Err(Error::NoFixedPoint)
    }
}

fn unit(v: (f64, f64)) -> (f64, f64) {
    let n = v.0.hypot(v.1);
    (v.0 / n, v.1 / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn mobius_square_root() {
        let f = canonicalize(&LiftedMap::mobius(Mat2::diag(4.0), 0).unwrap());
        let fl = one_parameter_flow(&f).unwrap();
        let LiftedMap::Mobius(h) = fl.lift_at(0.5) else { panic!() };
        assert!(h.matrix().distance(&Mat2::diag(2.0)) < 1e-12);
        assert!(fl.at(0.0).sup_distance(&CircleHomeo::identity(), 100) < 1e-14);
        assert!(fl.at(1.0).sup_distance(&f, 100) < 1e-12);
    }

    #[test]
    fn pl_flow_half_squared() {
        let f = canonicalize(&LiftedMap::pl(vec![(rat(0, 1), rat(0, 1)), (rat(1, 2), rat(3, 4))]).unwrap());
        let fl = one_parameter_flow(&f).unwrap();
        let half = fl.at(0.5);
        let sq = half.compose(&half);
        assert!(sq.sup_distance(&f, 1000) < 1e-9);
        assert!(fl.at(0.0).sup_distance(&CircleHomeo::identity(), 1000) < 1e-15);
        assert!(fl.at(1.0).sup_distance(&f, 1000) < 1e-9);
    }

    #[test]
    fn rotation_has_no_flow() {
        let r = canonicalize(&LiftedMap::rotation(rat(1, 3)));
        assert!(matches!(one_parameter_flow(&r), Err(Error::NoFixedPoint)));
        let ell = canonicalize(&LiftedMap::mobius(Mat2::rotation(0.4), 0).unwrap());
        assert!(matches!(one_parameter_flow(&ell), Err(Error::NoFixedPoint)));
    }

    #[test]
    fn parabolic_flow() {
        let f = canonicalize(&LiftedMap::mobius(Mat2::new(1.0, 1.0, 0.0, 1.0), 0).unwrap());
        let fl = one_parameter_flow(&f).unwrap();
        let a = fl.at(0.3).compose(&fl.at(0.7));
        assert!(a.sup_distance(&f, 200) < 1e-12);
    }
}
