//! Fuchsian models: the regular 4g-gon surface group and the once-punctured torus.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::{free_representation, new_representation, Representation, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::homeo::{canonicalize, classify, LiftedMap, Mat2};
use crate::surface::{Generator, SurfacePresentation, Word};

/// The side pairing of the regular hyperbolic 4g-gon with angle sum 2π and a vertex
/// direction at angle 0, numbered by side: it carries side `j + 2` onto side `j`.
fn side_pairing(g: usize, j: usize) -> Mat2 {
    let n = (4 * g) as f64;
    // distance from the center to each side
    let r = (1.0 / (PI / n).tan()).acosh();
    let mid = |k: usize| (2 * k + 1) as f64 * PI / n;
    let t = Mat2::new(r.exp(), 0.0, 0.0, (-r).exp());
    Mat2::rotation(mid(j + 2) / 2.0) * t * Mat2::rotation((PI - mid(j)) / 2.0)
}

/// `(ρ(a_i), ρ(b_i))` for `i = 1..=g`.
pub fn fuchsian_matrices(g: usize) -> Vec<(Mat2, Mat2)> {
    // handle i uses sides 4k, 4k+1 with k = g - i, which orders the
    // commutators so that their product closes up
    (1..=g)
        .map(|i| {
            let k = g - i;
            (side_pairing(g, 4 * k), side_pairing(g, 4 * k + 1).inverse())
        })
        .collect()
}

pub fn fuchsian_closed(g: usize) -> Result<Representation> {
    let pres = SurfacePresentation::new(g)?;
    let mut images = BTreeMap::new();
    for (i, (a, b)) in fuchsian_matrices(g).into_iter().enumerate() {
        let h = (i + 1) as u16;
        images.insert(Generator::A(h), canonicalize(&LiftedMap::mobius(a, 0)?));
        images.insert(Generator::B(h), canonicalize(&LiftedMap::mobius(b, 0)?));
    }
    let rep = new_representation(pres, images, DEFAULT_TOL)
        .map_err(|e| Error::ConstructionFailed(format!("genus {g}: {e}")))?;
    for gen in pres.generators() {
        if !classify(rep.image(gen)?, DEFAULT_TOL)?.is_hyperbolic() {
            return Err(Error::ConstructionFailed(format!("{gen} is not hyperbolic")));
        }
    }
    Ok(rep)
}

/// `a ↦ diag(λ, 1/λ)`, `b ↦` the conjugate of `a` by the quarter turn of the circle.
pub fn fuchsian_once_punctured_torus(lambda: f64) -> Result<Representation> {
    if lambda.is_nan() || lambda <= 1.0 {
        return Err(Error::PreconditionViolated(format!("lambda = {lambda} must exceed 1")));
    }
    let a = Mat2::diag(lambda);
    let q = Mat2::rotation_turns(0.25);
    let b = q * a * q.inverse();
    let mut images = BTreeMap::new();
    images.insert(Generator::A(1), canonicalize(&LiftedMap::mobius(a, 0)?));
    images.insert(Generator::B(1), canonicalize(&LiftedMap::mobius(b, 0)?));
    let rep = free_representation(1, images, DEFAULT_TOL)?;
    let comm = Word::commutator(&Word::gen(Generator::A(1)), &Word::gen(Generator::B(1)));
    let c = rep.evaluate_word_lift(&comm, &Default::default())?;
    let trace = match &c {
        LiftedMap::Mobius(m) => m.matrix().trace(),
        _ => return Err(Error::Internal("commutator of Möbius maps left the Möbius kind".into())),
    };
    if !(classify(&canonicalize(&c), DEFAULT_TOL)?.is_hyperbolic() && trace < -2.0) {
        return Err(Error::NotDiscreteRange { trace });
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotnum::displacement_spread;

    #[test]
    fn closed_surface_euler_numbers() {
        for g in 2..=4 {
            let rep = fuchsian_closed(g).unwrap();
            assert_eq!(rep.euler_number().unwrap(), -(2 * g as i64 - 2));
            let rel = rep
                .evaluate_word_lift(&SurfacePresentation::new(g).unwrap().relator(), &Default::default())
                .unwrap();
            assert!(displacement_spread(&rel, rep.euler_number().unwrap()) < 1e-9);
        }
    }

    #[test]
    fn torus_fixed_points() {
        let rep = fuchsian_once_punctured_torus(3.0).unwrap();
        let a = classify(rep.image(Generator::A(1)).unwrap(), 1e-9).unwrap();
        let b = classify(rep.image(Generator::B(1)).unwrap(), 1e-9).unwrap();
        let (ap, am) = a.hyperbolic_points().unwrap();
        let (bp, bm) = b.hyperbolic_points().unwrap();
        assert!(ap.angle().abs() < 1e-12 && (am.angle() - 0.5).abs() < 1e-12);
        assert!((bp.angle() - 0.25).abs() < 1e-12 && (bm.angle() - 0.75).abs() < 1e-12);
        assert!(matches!(
            fuchsian_once_punctured_torus(1.01),
            Err(Error::NotDiscreteRange { .. })
        ));
    }
}
