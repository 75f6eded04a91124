//! Relative Euler numbers of pants and subsurfaces, and Fuchsian-torus detection.

use serde::Serialize;

use super::{LiftChoice, Representation};
use crate::error::{Error, Result};
use crate::numeric::int;
use crate::rotnum::{translation_number, RotBound, DEFAULT_MAX_ITER};
use crate::surface::{algebraic_intersection, Pants, PantsDecomposition, Word};

fn rot(rep: &Representation, w: &Word) -> Result<RotBound> {
    if let Some(p) = rep.presentation() {
        p.check_word(w)?;
    }
    let f = rep.evaluate_word_lift(w, &LiftChoice::new())?;
    translation_number(&f, rep.tol(), DEFAULT_MAX_ITER)
}

/// `rot̃(x̃) + rot̃(ỹ) − rot̃(ỹ x̃)` for the boundary triple `(x, y, (yx)⁻¹)`.
pub fn pants_euler(rep: &Representation, pants: &Pants) -> Result<RotBound> {
    pants.validate()?;
    let x = pants.x();
    let y = pants.y();
    let v = rot(rep, x)?.add(&rot(rep, y)?).sub(&rot(rep, &y.mul(x))?);
    let slack = 1.0 + rep.tol();
    if v.lo < -slack || v.hi > slack {
        return Err(Error::Internal(format!(
            "pants {} Euler enclosure [{}, {}] leaves [-1, 1]",
            pants.label, v.lo, v.hi
        )));
    }
    Ok(v)
}

/// Sum of the pants values; for a decomposition of the closed surface this is `eu(ρ)`.
pub fn subsurface_euler(rep: &Representation, decomposition: &PantsDecomposition) -> Result<RotBound> {
    decomposition.validate()?;
    decomposition
        .pants
        .iter()
        .try_fold(RotBound::exact(int(0), None), |acc, p| Ok(acc.add(&pants_euler(rep, p)?)))
}

/// Translation number of the lifted commutator `[ã, b̃]`, independent of the lifts.
pub fn lifted_commutator_translation(rep: &Representation, a: &Word, b: &Word) -> Result<RotBound> {
    rot(rep, &Word::commutator(a, b))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusWitness {
    pub a: Word,
    pub b: Word,
    pub value: i64,
    pub bound: RotBound,
}

/// The first pair whose lifted commutator has translation number exactly ±1.
pub fn detect_fuchsian_torus(rep: &Representation, pairs: &[(Word, Word)]) -> Result<Option<TorusWitness>> {
    for (a, b) in pairs {
        let i = algebraic_intersection(a, b);
        if i.abs() != 1 {
            return Err(Error::PreconditionViolated(format!("i({a}, {b}) = {i}, expected ±1")));
        }
        let bound = lifted_commutator_translation(rep, a, b)?;
        if let Some(v @ (1 | -1)) = bound.exact_integer() {
            return Ok(Some(TorusWitness {
                a: a.clone(),
                b: b.clone(),
                value: v,
                bound,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representation::{fuchsian_closed, fuchsian_once_punctured_torus, Representation};
    use crate::surface::{four_holed_sphere_genus2, standard_pants_decomposition, Generator, SurfacePresentation};

    #[test]
    fn fuchsian_additivity() {
        for g in [2, 3] {
            let rep = fuchsian_closed(g).unwrap();
            let pres = SurfacePresentation::new(g).unwrap();
            let d = standard_pants_decomposition(&pres);
            for p in &d.pants[..g] {
                assert_eq!(pants_euler(&rep, p).unwrap().exact_integer(), Some(-1), "{}", p.label);
            }
            let s = subsurface_euler(&rep, &d).unwrap();
            assert!(s.width() < 1e-6);
            assert!(s.contains(rep.euler_number().unwrap() as f64, 0.0));
        }
    }

    #[test]
    fn four_holed_sphere() {
        let rep = fuchsian_closed(2).unwrap();
        let s = four_holed_sphere_genus2();
        let x = subsurface_euler(&rep, &s.ab_cd).unwrap();
        let y = subsurface_euler(&rep, &s.bc_da).unwrap();
        assert!(x.contains(-2.0, 0.0) && x.width() < 1e-6);
        assert!((x.mid() - y.mid()).abs() < 1e-6);
    }

    #[test]
    fn torus_detection() {
        let rep = fuchsian_closed(2).unwrap();
        let pres = SurfacePresentation::new(2).unwrap();
        let w = detect_fuchsian_torus(&rep, &pres.handle_pairs()).unwrap().unwrap();
        assert_eq!((w.a.clone(), w.value), (Word::gen(Generator::A(1)), -1));
        let t = Representation::trivial(2).unwrap();
        assert!(detect_fuchsian_torus(&t, &pres.handle_pairs()).unwrap().is_none());
        let torus = fuchsian_once_punctured_torus(3.0).unwrap();
        let v = lifted_commutator_translation(&torus, &Word::gen(Generator::A(1)), &Word::gen(Generator::B(1))).unwrap();
        assert_eq!(v.exact_integer().map(i64::abs), Some(1));
    }
}
