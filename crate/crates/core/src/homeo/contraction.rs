//! Ping-pong style contraction of `f^N g` for hyperbolic `f`.

use serde::{Deserialize, Serialize};

use super::classify::{classify, DynClass};
use super::lift::{CircleHomeo, LiftedMap};
use super::point::{ccw, CirclePoint};
use crate::error::{Error, Result};

/// Containment margin for float endpoint images.
const MARGIN: f64 = 1e-12;

/// The open arc from `start` counterclockwise of length `len` in (0,1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleArc {
    pub start: f64,
    pub len: f64,
}

impl CircleArc {
    pub fn new(start: f64, len: f64) -> Result<Self> {
        if !(len > 0.0 && len < 1.0) {
            return Err(Error::PreconditionViolated(format!("arc length {len} not in (0,1)")));
        }
        Ok(CircleArc {
            start: start - start.floor(),
            len,
        })
    }

    pub fn centered(center: f64, radius: f64) -> Result<Self> {
        CircleArc::new(center - radius, 2.0 * radius)
    }

    pub fn end(&self) -> f64 {
        let e = self.start + self.len;
        e - e.floor()
    }

    pub fn contains(&self, x: f64) -> bool {
        let u = ccw(self.start, x);
        u > MARGIN && u < self.len - MARGIN
    }

    /// The closed complementary arc, as `(start, end)` endpoints going counterclockwise.
    pub fn complement(&self) -> (f64, f64) {
        (self.end(), self.start)
    }

    /// Whether the closed arc `[a, b]` (counterclockwise) lies inside this open arc.
    pub fn contains_closed(&self, a: f64, b: f64) -> bool {
        let ua = ccw(self.start, a);
        let ub = ccw(self.start, b);
        ua > MARGIN && ua <= ub && ub < self.len - MARGIN
    }

    pub fn disjoint_from(&self, other: &CircleArc) -> bool {
        !self.contains(other.start)
            && !self.contains(other.end())
            && !other.contains(self.start)
            && ccw(self.start, other.start) >= self.len
            && ccw(other.start, self.start) >= other.len
    }
}

/// `U_-`, `U_+` around the repeller and attractor of `f`; `V_-` around `g⁻¹(f_-)`,
/// `V_+` around `g(f_+)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractionArcs {
    pub u_minus: CircleArc,
    pub u_plus: CircleArc,
    pub v_minus: CircleArc,
    pub v_plus: CircleArc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractionCertificate {
    pub power: u32,
    /// Endpoint images of `f^N g (S¹ ∖ V_-)`.
    pub forward_image: (f64, f64),
    /// Endpoint images of `g f^N (S¹ ∖ U_-)`.
    pub backward_image: (f64, f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `f^N g`
    Forward,
    /// `f^{-N} g`
    Backward,
}

/// `f^{±N} g` maps the closed arc `trap` into itself, so it has a fixed point there.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointWitness {
    pub direction: Direction,
    pub power: u32,
    pub trap: CircleArc,
    pub image: (f64, f64),
}

impl FixedPointWitness {
    /// The map `f^{±N} g` whose fixed point is certified.
    pub fn map(&self, f: &CircleHomeo, g: &CircleHomeo) -> LiftedMap {
        let n = match self.direction {
            Direction::Forward => self.power as i64,
            Direction::Backward => -(self.power as i64),
        };
        f.lift().power(n).compose(g.lift())
    }
}

fn hyperbolic_points(f: &CircleHomeo, tol: f64) -> Result<(f64, f64)> {
    match classify(f, tol)? {
        DynClass::Hyperbolic { attracting, repelling } => Ok((attracting.angle(), repelling.angle())),
        _ => Err(Error::NotHyperbolic(format!("{}", f.lift()))),
    }
}

fn arc_image(h: &LiftedMap, from: f64, to: f64) -> (f64, f64) {
    let a = h.eval(from);
    let b = h.eval(to);
    (a - a.floor(), b - b.floor())
}

/// Smallest `N <= max_power` with `f^N g (S¹ ∖ V_-) ⊂ U_+` and `g f^N (S¹ ∖ U_-) ⊂ V_+`,
/// both checked on endpoint images of the complementary closed arcs.
pub fn find_contraction_power(
    f: &CircleHomeo,
    g: &CircleHomeo,
    arcs: &ContractionArcs,
    max_power: u32,
    tol: f64,
) -> Result<ContractionCertificate> {
    let (fp, fm) = hyperbolic_points(f, tol)?;
    let gl = g.lift();
    let g_inv = gl.invert();
    if !arcs.u_plus.contains(fp) || !arcs.u_minus.contains(fm) {
        return Err(Error::PreconditionViolated("U arcs must contain the fixed points of f".into()));
    }
    if !arcs.v_minus.contains(g_inv.eval(fm)) || !arcs.v_plus.contains(gl.eval(fp)) {
        return Err(Error::PreconditionViolated("V arcs must contain g^-1(f_-) and g(f_+)".into()));
    }
    let (va, vb) = arcs.v_minus.complement();
    let (ua, ub) = arcs.u_minus.complement();
    let mut fnl = LiftedMap::identity();
    for n in 1..=max_power {
        fnl = f.lift().compose(&fnl);
        let forward = fnl.compose(gl);
        let backward = gl.compose(&fnl);
        let fi = arc_image(&forward, va, vb);
        let bi = arc_image(&backward, ua, ub);
        if arcs.u_plus.contains_closed(fi.0, fi.1) && arcs.v_plus.contains_closed(bi.0, bi.1) {
            return Ok(ContractionCertificate {
                power: n,
                forward_image: fi,
                backward_image: bi,
            });
        }
    }
    Err(Error::NoContractionPower { max_power })
}

/// Certifies that `f^N g` or `f^{-N} g` has a fixed point for some `N <= max_power`, unless
/// `g` exchanges the fixed points of `f`.
pub fn fixed_point_alternative(
    f: &CircleHomeo,
    g: &CircleHomeo,
    max_power: u32,
    tol: f64,
) -> Result<FixedPointWitness> {
    let (fp, fm) = hyperbolic_points(f, tol)?;
    let gl = g.lift();
    let g_inv = gl.invert();
    let dist = |a: f64, b: f64| {
        let d = ccw(a, b);
        d.min(1.0 - d)
    };
    // forward: attractor f_+, repeller point to avoid g⁻¹(f_-)
    // backward: attractor f_-, repeller point to avoid g⁻¹(f_+)
    let candidates = [
        (Direction::Forward, fp, g_inv.eval(fm)),
        (Direction::Backward, fm, g_inv.eval(fp)),
    ];
    for (direction, attractor, avoid) in candidates {
        let sep = dist(attractor, avoid);
        if sep <= tol {
            continue;
        }
        let r = (sep / 4.0).min(0.1);
        let trap_open = CircleArc::centered(attractor, r)?;
        let hole = CircleArc::centered(avoid, r)?;
        let (ka, kb) = hole.complement();
        let mut pow = LiftedMap::identity();
        let step = match direction {
            Direction::Forward => f.lift().clone(),
            Direction::Backward => f.lift().invert(),
        };
        for n in 1..=max_power {
            pow = step.compose(&pow);
            let h = pow.compose(gl);
            let image = arc_image(&h, ka, kb);
            if trap_open.contains_closed(image.0, image.1) {
                // the image lies in the trap, which lies in the closed complement of the hole
                return Ok(FixedPointWitness {
                    direction,
                    power: n,
                    trap: trap_open,
                    image,
                });
            }
        }
    }
    let swaps = dist(g_inv.eval(fm), fp) <= tol && dist(g_inv.eval(fp), fm) <= tol;
    if swaps {
        Err(Error::ExchangedFixedPoints)
    } else {
        Err(Error::NoContractionPower { max_power })
    }
}

/// Attracting point of `f^N g` when that map classifies hyperbolic.
pub fn attracting_point_of_product(f: &CircleHomeo, g: &CircleHomeo, n: u32, tol: f64) -> Result<CirclePoint> {
    let h = super::lift::canonicalize(&f.lift().power(n as i64).compose(g.lift()));
    match classify(&h, tol)? {
        DynClass::Hyperbolic { attracting, .. } => Ok(attracting),
        _ => Err(Error::NotHyperbolic(format!("f^{n} g"))),
    }
}
