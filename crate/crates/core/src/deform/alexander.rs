//! The Alexander trick for representations with a global fixed point.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::homeo::classify::exact_fixed_level;
use crate::homeo::{canonicalize, CircleHomeo, FixedComponent, LiftedMap, PlLift};
use crate::numeric::{dyadic, floor_i64, int, Rational};
use crate::representation::Representation;

fn exact_pl(f: &CircleHomeo) -> Result<PlLift> {
    f.lift().to_pl().ok_or(Error::UnsupportedKind(f.lift().kind_name()))
}

/// Lift of `f` fixing `p`, or an error naming the generator that moves it.
fn lift_fixing(g: &str, f: &CircleHomeo, p: &Rational) -> Result<PlLift> {
    let pl = exact_pl(f)?;
    let d = pl.eval_exact(p) - p;
    if !d.is_integer() {
        return Err(Error::NoGlobalFixedPoint(format!("{g} moves {p}")));
    }
    Ok(pl.shift(-floor_i64(&d)))
}

/// A point fixed by every generator image, searched among the endpoints of the exact
/// fixed sets (which is where a nonempty intersection of them must have a boundary point).
pub fn common_fixed_point(rep: &Representation) -> Result<Rational> {
    let mut candidates = vec![Rational::zero()];
    for f in rep.images().values() {
        let pl = exact_pl(f)?;
        if let Some(k) = exact_fixed_level(f.lift()) {
            for c in pl.solve_displacement(&int(k)) {
                candidates.push(c.start().clone());
                if let FixedComponent::Interval(_, hi) = &c {
                    candidates.push(hi.clone());
                }
            }
        }
    }
    candidates
        .into_iter()
        .find(|p| {
            rep.images()
                .iter()
                .all(|(g, f)| lift_fixing(&g.to_string(), f, p).is_ok())
        })
        .ok_or_else(|| Error::NoGlobalFixedPoint("no common fixed point among fixed-set endpoints".into()))
}

/// `x ↦ p + s(F(p + (x − p)/s) − p)` on `[p, p + s]` and the identity on `[p + s, p + 1]`,
/// for the lift `F` fixing `p`.
fn shrink(f: &PlLift, p: &Rational, s: &Rational) -> Result<PlLift> {
    if s.is_zero() {
        return Ok(PlLift::identity());
    }
    let mut pts = vec![(p.clone(), p.clone())];
    for (x, y) in f.breakpoints() {
        // move the breakpoint into [p, p + 1)
        let n = (x - p).floor();
        let (x, y) = (x - &n, y - &n);
        if x == *p {
            continue;
        }
        pts.push((p + s * (&x - p), p + s * (&y - p)));
    }
    if !s.is_one() {
        let e = p + s;
        pts.push((e.clone(), e));
    }
    PlLift::new(pts)
}

/// The time-`t` representation of the Alexander-trick path from `rep` (t = 0) to the
/// trivial representation (t = 1). `t` is rounded to the dyadic grid 2⁻⁴⁰.
pub fn alexander_trick(rep: &Representation, p: &Rational, t: f64) -> Result<Representation> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::PreconditionViolated(format!("t = {t} outside [0, 1]")));
    }
    let s = int(1) - dyadic(t, 40);
    let mut images = rep.images().clone();
    for (g, f) in rep.images() {
        let lift = lift_fixing(&g.to_string(), f, p)?;
        images.insert(*g, canonicalize(&LiftedMap::from_pl(shrink(&lift, p, &s)?)));
    }
    rep.with_images(images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;
    use crate::representation::{new_representation, DEFAULT_TOL};
    use crate::surface::{Generator, SurfacePresentation};
    use std::collections::BTreeMap;

    fn pl(pts: &[(i64, i64, i64)]) -> CircleHomeo {
        canonicalize(&LiftedMap::pl(pts.iter().map(|&(x, y, q)| (rat(x, q), rat(y, q))).collect()).unwrap())
    }

    /// Genus two, every image fixing 0; handle two repeats handle one so the relator holds.
    fn fixing_zero() -> Representation {
        let f = pl(&[(0, 0, 8), (2, 1, 8), (4, 6, 8)]);
        let g = pl(&[(0, 0, 8), (3, 5, 8), (5, 6, 8)]);
        let pres = SurfacePresentation::new(2).unwrap();
        let mut m = BTreeMap::new();
        m.insert(Generator::A(1), f.clone());
        m.insert(Generator::B(1), g.clone());
        m.insert(Generator::A(2), g);
        m.insert(Generator::B(2), f);
        new_representation(pres, m, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn endpoints_and_euler_number() {
        let rep = fixing_zero();
        let p = common_fixed_point(&rep).unwrap();
        assert_eq!(p, rat(0, 1));
        assert_eq!(alexander_trick(&rep, &p, 0.0).unwrap(), rep);
        let end = alexander_trick(&rep, &p, 1.0).unwrap();
        assert!(end.images().values().all(|f| *f == CircleHomeo::identity()));
        for t in [0.0, 0.5, 1.0] {
            assert_eq!(alexander_trick(&rep, &p, t).unwrap().euler_number().unwrap(), 0);
        }
    }

    #[test]
    fn midpoint_is_conjugated_into_half_circle() {
        let rep = fixing_zero();
        let half = alexander_trick(&rep, &rat(0, 1), 0.5).unwrap();
        let f = half.image(Generator::A(1)).unwrap();
        // F(1/4) = 1/8 for the original, so the shrunk map sends 1/8 to 1/16
        assert_eq!(f.lift().eval_exact(&rat(1, 8)), Some(rat(1, 16)));
        assert_eq!(f.lift().eval_exact(&rat(3, 4)), Some(rat(3, 4)));
    }

    #[test]
    fn moving_generator_is_rejected() {
        let rep = Representation::trivial(2).unwrap();
        let mut m = rep.images().clone();
        m.insert(Generator::A(1), canonicalize(&LiftedMap::rotation(rat(1, 3))));
        m.insert(Generator::B(1), canonicalize(&LiftedMap::rotation(rat(1, 5))));
        let moved = rep.with_images(m).unwrap();
        assert!(matches!(common_fixed_point(&moved), Err(Error::NoGlobalFixedPoint(_))));
        assert!(matches!(
            alexander_trick(&moved, &rat(0, 1), 0.5),
            Err(Error::NoGlobalFixedPoint(_))
        ));
    }
}
