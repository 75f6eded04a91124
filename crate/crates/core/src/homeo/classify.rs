//! Fixed sets and the hyperbolic / neutral / fixed-point-free trichotomy of single maps.

use serde::{Deserialize, Serialize};

use super::lift::{CircleHomeo, LiftedMap};
use super::mobius::{Mat2, MobiusLift};
use super::pl::{FixedComponent, PlLift};
use super::point::CirclePoint;
use crate::error::{Error, Result};
use crate::numeric::{floor_i64, int, Rational};
use num_traits::{Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Attracting,
    Repelling,
    /// Attracting on one side and repelling on the other.
    Neutral,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FixedPiece {
    Point { at: CirclePoint, stability: Stability },
    /// Closed arc from `start` counterclockwise to `end`; `start == end` is the whole circle.
    Arc { start: CirclePoint, end: CirclePoint },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum DynClass {
    FixedPointFree,
    Hyperbolic { attracting: CirclePoint, repelling: CirclePoint },
    SingleNeutralFixed { point: CirclePoint },
    GeneralFixed { fixed_set: Vec<FixedPiece> },
}

impl DynClass {
    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, DynClass::Hyperbolic { .. })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            DynClass::FixedPointFree => "fixed_point_free",
            DynClass::Hyperbolic { .. } => "hyperbolic",
            DynClass::SingleNeutralFixed { .. } => "single_neutral_fixed",
            DynClass::GeneralFixed { .. } => "general_fixed",
        }
    }

    /// `(attracting, repelling)` for hyperbolic classes.
    pub fn hyperbolic_points(&self) -> Option<(&CirclePoint, &CirclePoint)> {
        match self {
            DynClass::Hyperbolic { attracting, repelling } => Some((attracting, repelling)),
            _ => None,
        }
    }

    /// Isolated fixed points, in the order found.
    pub fn fixed_points(&self) -> Vec<CirclePoint> {
        match self {
            DynClass::FixedPointFree => vec![],
            DynClass::Hyperbolic { attracting, repelling } => vec![attracting.clone(), repelling.clone()],
            DynClass::SingleNeutralFixed { point } => vec![point.clone()],
            DynClass::GeneralFixed { fixed_set } => fixed_set
                .iter()
                .filter_map(|p| match p {
                    FixedPiece::Point { at, .. } => Some(at.clone()),
                    FixedPiece::Arc { .. } => None,
                })
                .collect(),
        }
    }

    fn from_pieces(pieces: Vec<FixedPiece>) -> DynClass {
        if pieces.is_empty() {
            return DynClass::FixedPointFree;
        }
        let all_points = pieces.iter().all(|p| matches!(p, FixedPiece::Point { .. }));
        if all_points && pieces.len() == 1 {
            if let FixedPiece::Point { at, .. } = &pieces[0] {
                return DynClass::SingleNeutralFixed { point: at.clone() };
            }
        }
        if all_points && pieces.len() == 2 {
            let st: Vec<_> = pieces
                .iter()
                .map(|p| match p {
                    FixedPiece::Point { at, stability } => (at.clone(), *stability),
                    FixedPiece::Arc { .. } => unreachable!(),
                })
                .collect();
            match (st[0].1, st[1].1) {
                (Stability::Attracting, Stability::Repelling) => {
                    return DynClass::Hyperbolic {
                        attracting: st[0].0.clone(),
                        repelling: st[1].0.clone(),
                    }
                }
                (Stability::Repelling, Stability::Attracting) => {
                    return DynClass::Hyperbolic {
                        attracting: st[1].0.clone(),
                        repelling: st[0].0.clone(),
                    }
                }
                _ => {}
            }
        }
        DynClass::GeneralFixed { fixed_set: pieces }
    }
}

pub fn classify(f: &CircleHomeo, tol: f64) -> Result<DynClass> {
    classify_lift(f.lift(), tol)
}

/// Classification of the circle map underlying any lift.
pub fn classify_lift(f: &LiftedMap, tol: f64) -> Result<DynClass> {
    match f {
        LiftedMap::Rotation(t) => Ok(if t.is_integer() {
            DynClass::GeneralFixed {
                fixed_set: vec![whole_circle()],
            }
        } else {
            DynClass::FixedPointFree
        }),
        LiftedMap::Pl(p) => Ok(classify_pl(p)),
        LiftedMap::Mobius(m) => Ok(classify_mobius(m)),
        LiftedMap::Flow(_) | LiftedMap::Composite(_) => classify_numeric(f, tol),
    }
}

fn whole_circle() -> FixedPiece {
    let z = CirclePoint::exact(Rational::zero());
    FixedPiece::Arc {
        start: z.clone(),
        end: z,
    }
}

fn sign_of(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

fn stability(left_sign: i8, right_sign: i8) -> Stability {
    match (left_sign, right_sign) {
        (1, -1) => Stability::Attracting,
        (-1, 1) => Stability::Repelling,
        _ => Stability::Neutral,
    }
}

/// The integer `k` for which `F(x) = x + k` has solutions, if any.
pub(crate) fn pl_fixed_level(p: &PlLift) -> Option<Rational> {
    let (lo, hi) = p.displacement_range();
    let k = hi.floor();
    (k >= lo).then_some(k)
}

pub fn classify_pl(p: &PlLift) -> DynClass {
    let Some(k) = pl_fixed_level(p) else {
        return DynClass::FixedPointFree;
    };
    let one = int(1);
    let comps = p.solve_displacement(&k);
    let pieces = comps
        .into_iter()
        .map(|c| match c {
            FixedComponent::Point(x) => {
                let (sl, sr) = p.one_sided_slopes(&x);
                FixedPiece::Point {
                    at: CirclePoint::exact(x),
                    stability: stability(sign_of(&(&one - sl)), sign_of(&(sr - &one))),
                }
            }
            FixedComponent::Interval(a, b) => {
                if &b - &a == one {
                    whole_circle()
                } else {
                    FixedPiece::Arc {
                        start: CirclePoint::exact(a),
                        end: CirclePoint::exact(b),
                    }
                }
            }
        })
        .collect();
    DynClass::from_pieces(pieces)
}

const TRACE_EPS: f64 = 1e-12;

pub fn classify_mobius(m: &MobiusLift) -> DynClass {
    let a = m.matrix();
    let tr = a.trace().abs();
    if tr > 2.0 + TRACE_EPS {
        let (att, rep) = a.eigen_angles().expect("hyperbolic");
        let err = 1e-14 * a.norm_sup().powi(2);
        return DynClass::Hyperbolic {
            attracting: CirclePoint::approx(att, err),
            repelling: CirclePoint::approx(rep, err),
        };
    }
    if tr < 2.0 - TRACE_EPS {
        return DynClass::FixedPointFree;
    }
    let s = a.trace().signum();
    if a.scale(s).distance(&Mat2::IDENTITY) < TRACE_EPS {
        return DynClass::GeneralFixed {
            fixed_set: vec![whole_circle()],
        };
    }
    let n = Mat2::new(a.a * s - 1.0, a.b * s, a.c * s, a.d * s - 1.0);
    let v = if n.a.abs() + n.b.abs() > n.c.abs() + n.d.abs() {
        (n.b, -n.a)
    } else {
        (n.d, -n.c)
    };
    DynClass::SingleNeutralFixed {
        point: CirclePoint::approx(Mat2::angle_of(v), 1e-8),
    }
}

const GRID: usize = 2048;

/// Sampled sign analysis of `F(x) - x - k` followed by bisection.
fn classify_numeric(f: &LiftedMap, tol: f64) -> Result<DynClass> {
    let xs: Vec<f64> = (0..GRID).map(|i| i as f64 / GRID as f64).collect();
    let d: Vec<f64> = xs.iter().map(|&x| f.eval(x) - x).collect();
    let lo = d.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ambiguous = |detail: String| Error::AmbiguousAtTolerance { tol, detail };
    let mut pieces = Vec::new();
    for k in (lo - tol).ceil() as i64..=(hi + tol).floor() as i64 {
        let sign = |v: f64| -> i8 {
            if v > tol {
                1
            } else if v < -tol {
                -1
            } else {
                0
            }
        };
        let s: Vec<i8> = d.iter().map(|&v| sign(v - k as f64)).collect();
        if s.iter().all(|&v| v == 0) {
            return Err(ambiguous(format!("displacement within tolerance of {k} everywhere")));
        }
        if s.iter().all(|&v| v == s[0]) {
            continue;
        }
        // rotate so that index 0 carries a nonzero sign
        let start = s.iter().position(|&v| v != 0).expect("some nonzero");
        let mut i = 0;
        while i < GRID {
            let a = (start + i) % GRID;
            let sa = s[a];
            // run of zeros after a
            let mut j = 1;
            while s[(start + i + j) % GRID] == 0 && j <= GRID {
                j += 1;
            }
            let b = (start + i + j) % GRID;
            let sb = s[b];
            if sa != sb {
                if j > 3 {
                    return Err(ambiguous(format!(
                        "displacement near {k} over {} grid cells around x = {}",
                        j,
                        xs[a]
                    )));
                }
                let xa = xs[a];
                let width = j as f64 / GRID as f64;
                let root = bisect(|x| f.eval(x) - x - k as f64, xa, xa + width, sa);
                pieces.push(FixedPiece::Point {
                    at: CirclePoint::approx(root, 1e-13),
                    stability: stability(sa, sb),
                });
            } else if j > 1 {
                return Err(ambiguous(format!(
                    "displacement touches {k} without crossing near x = {}",
                    xs[(a + 1) % GRID]
                )));
            }
            i += j;
        }
    }
    Ok(DynClass::from_pieces(pieces))
}

/// Root of `g` in `[a, b]` where `g(a)` has sign `sa`.
fn bisect(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64, sa: i8) -> f64 {
    let sa = sa as f64;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if g(m) * sa > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Integer `k` with `F(x) = x + k` solvable for exact kinds; used by flows and certificates.
pub fn exact_fixed_level(f: &LiftedMap) -> Option<i64> {
    f.to_pl().and_then(|p| pl_fixed_level(&p)).map(|k| floor_i64(&k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homeo::lift::canonicalize;
    use crate::numeric::rat;

    #[test]
    fn classification_examples() {
        let f = canonicalize(&LiftedMap::mobius(Mat2::diag(2.0), 0).unwrap());
        let DynClass::Hyperbolic { attracting, repelling } = classify(&f, 1e-9).unwrap() else {
            panic!()
        };
        assert!(attracting.distance(&CirclePoint::exact(rat(0, 1))) < 1e-15);
        assert!(repelling.distance(&CirclePoint::exact(rat(1, 2))) < 1e-15);

        let r = canonicalize(&LiftedMap::rotation(rat(1, 3)));
        assert_eq!(classify(&r, 1e-9).unwrap(), DynClass::FixedPointFree);

        let p = canonicalize(&LiftedMap::pl(vec![(rat(0, 1), rat(0, 1)), (rat(1, 2), rat(3, 4))]).unwrap());
        assert_eq!(
            classify(&p, 1e-9).unwrap(),
            DynClass::SingleNeutralFixed {
                point: CirclePoint::exact(rat(0, 1))
            }
        );
    }

    #[test]
    fn pl_hyperbolic_and_intervals() {
        // attracting at 0, repelling at 1/2
        let p = PlLift::new(vec![
            (rat(0, 1), rat(0, 1)),
            (rat(1, 4), rat(1, 8)),
            (rat(1, 2), rat(1, 2)),
            (rat(3, 4), rat(7, 8)),
        ])
        .unwrap();
        let c = classify_pl(&p);
        let (a, r) = c.hyperbolic_points().unwrap();
        assert_eq!(a.as_exact(), Some(&rat(0, 1)));
        assert_eq!(r.as_exact(), Some(&rat(1, 2)));

        let q = PlLift::new(vec![
            (rat(0, 1), rat(0, 1)),
            (rat(1, 4), rat(1, 4)),
            (rat(1, 2), rat(3, 4)),
        ])
        .unwrap();
        let DynClass::GeneralFixed { fixed_set } = classify_pl(&q) else { panic!() };
        assert_eq!(
            fixed_set,
            vec![FixedPiece::Arc {
                start: CirclePoint::exact(rat(0, 1)),
                end: CirclePoint::exact(rat(1, 4))
            }]
        );
    }

    #[test]
    fn composite_matches_exact() {
        let f = LiftedMap::mobius(Mat2::diag(3.0), 0).unwrap();
        let c = LiftedMap::pl(vec![(rat(0, 1), rat(1, 10)), (rat(1, 3), rat(1, 2))]).unwrap();
        let g = f.conjugate_by(&c);
        assert_eq!(g.kind_name(), "composite");
        let (a, r) = classify_lift(&g, 1e-9).unwrap().hyperbolic_points().map(|(a, r)| (a.clone(), r.clone())).unwrap();
        assert!((a.angle() - 0.1).abs() < 1e-12);
        assert!((r.angle() - c.eval(0.5).fract()).abs() < 1e-12);
    }
}
