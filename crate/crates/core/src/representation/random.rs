//! Seeded random maps and random genus-two representations.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::Rng;

use super::{new_representation, Representation, DEFAULT_TOL};
use crate::error::Result;
use crate::homeo::{canonicalize, CircleHomeo, LiftedMap, Mat2, PlLift};
use crate::numeric::rat;
use crate::surface::{Generator, SurfacePresentation};

/// Grid for random PL breakpoints.
const GRID: i64 = 64;

/// A PL homeomorphism with `pieces` breakpoints on the 1/64 grid.
pub fn random_pl_homeo<R: Rng + ?Sized>(rng: &mut R, pieces: usize) -> CircleHomeo {
    let pieces = pieces.clamp(1, GRID as usize);
    let mut xs = sample(rng, GRID as usize, pieces).into_vec();
    let mut ys = sample(rng, GRID as usize, pieces).into_vec();
    xs.sort_unstable();
    ys.sort_unstable();
    let offset = rng.gen_range(0..GRID);
    let pts = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| (rat(x as i64, GRID), rat(y as i64 + offset, GRID)))
        .collect();
    canonicalize(&LiftedMap::from_pl(PlLift::new(pts).expect("sorted distinct grid points")))
}

/// A rotation by `p/q` with `q <= q_max`.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R, q_max: i64) -> CircleHomeo {
    let q = rng.gen_range(1..=q_max);
    let p = rng.gen_range(0..q);
    canonicalize(&LiftedMap::rotation(rat(p, q)))
}

/// `R(θ₁) diag(λ, 1/λ) R(θ₂)` with `λ ∈ [1.2, 4]`.
pub fn random_mobius_matrix<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let l = rng.gen_range(1.2..4.0);
    Mat2::rotation_turns(rng.gen()) * Mat2::diag(l) * Mat2::rotation_turns(rng.gen())
}

pub fn random_mobius<R: Rng + ?Sized>(rng: &mut R) -> CircleHomeo {
    canonicalize(&LiftedMap::mobius(random_mobius_matrix(rng), 0).expect("det 1"))
}

/// Determinant-one eigenbasis of a hyperbolic matrix, expanding direction first.
fn eigenbasis(m: &Mat2) -> Option<(Mat2, f64)> {
    let tr = m.trace();
    if tr <= 2.0 + 1e-9 {
        return None;
    }
    let big = (tr + (tr * tr - 4.0).sqrt()) / 2.0;
    let u = m.eigenvector(big);
    let v = m.eigenvector(1.0 / big);
    let mut p = Mat2::new(u.0, v.0, u.1, v.1);
    if p.det() < 0.0 {
        p = Mat2::new(u.0, -v.0, u.1, -v.1);
    }
    let d = p.det();
    if d.abs() < 1e-12 {
        return None;
    }
    Some((p.scale(1.0 / d.sqrt()), big))
}

/// Random `a1, b1` (half the time a conjugated punctured-torus pair), then `a2` with the trace condition that makes `[a2, b2] = [a1, b1]⁻¹`
/// solvable, then `b2` as a conjugator (times a random element commuting with `a2`).
pub fn solve_genus2_mobius<R: Rng + ?Sized>(rng: &mut R) -> Option<[Mat2; 4]> {
    let (a1, b1) = if rng.gen_bool(0.5) {
        (random_mobius_matrix(rng), random_mobius_matrix(rng))
    } else {
        // a conjugated punctured-torus pair, whose commutator has trace below -2
        let m = random_mobius_matrix(rng);
        let a = Mat2::diag(rng.gen_range(2.0..4.0));
        let q = Mat2::rotation_turns(0.25);
        (m * a * m.inverse(), m * q * a * q.inverse() * m.inverse())
    };
    let c = (b1.inverse() * a1.inverse() * b1 * a1).inverse();
    let r = Mat2::rotation_turns(rng.gen());
    let cp = r.inverse() * c * r;
    for sign in [1.0, -1.0] {
        // tr(C a2⁻¹) = ±tr(a2) with a2 = R diag(μ, 1/μ) R⁻¹
        let mu2 = -(cp.a - sign) / (cp.d - sign);
        if !(mu2.is_finite() && mu2 > 0.0) {
            continue;
        }
        let mu = mu2.sqrt();
        if mu.ln().abs() < 0.05 || mu.ln().abs() > 6.0 {
            continue;
        }
        let a2 = r * Mat2::diag(mu) * r.inverse();
        let x = a2.inverse();
        let y = (c * x).scale(sign);
        let (p, _) = eigenbasis(&x)?;
        let (q, _) = eigenbasis(&y)?;
        let k = rng.gen_range(-1.0f64..1.0).exp();
        let b2 = p * Mat2::diag(k) * q.inverse();
        let comm = |u: Mat2, v: Mat2| v.inverse() * u.inverse() * v * u;
        let rel = comm(a1, b1) * comm(a2, b2);
        let residual = rel.distance(&Mat2::diag(1.0)).min(rel.distance(&Mat2::diag(1.0).scale(-1.0)));
        // reject ill-conditioned solves; downstream checks use 1e-9
        if residual > 1e-12 || b2.norm_sup() > 1e3 {
            return None;
        }
        return Some([a1, b1, a2, b2]);
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomFamily {
    /// Rotations on the first handle, powers of one PL map on the second.
    RotationsAndPowers,
    /// `a2 = h b1 h⁻¹`, `b2 = h a1 h⁻¹` with `h` a power of `[a1, b1]`, all PL.
    PlDouble,
    /// Möbius matrices with the last generator solved for.
    MobiusSolved,
    /// A solved Möbius representation conjugated by a random PL map.
    MobiusConjugated,
}

impl RandomFamily {
    pub const ALL: [RandomFamily; 4] = [
        RandomFamily::RotationsAndPowers,
        RandomFamily::PlDouble,
        RandomFamily::MobiusSolved,
        RandomFamily::MobiusConjugated,
    ];
}

fn genus2(images: [CircleHomeo; 4]) -> Result<Representation> {
    let pres = SurfacePresentation::new(2)?;
    let [a1, b1, a2, b2] = images;
    let map: BTreeMap<_, _> = [
        (Generator::A(1), a1),
        (Generator::B(1), b1),
        (Generator::A(2), a2),
        (Generator::B(2), b2),
    ]
    .into_iter()
    .collect();
    new_representation(pres, map, DEFAULT_TOL)
}

/// A verified random genus-two representation from the given family.
pub fn random_genus2_rep<R: Rng + ?Sized>(rng: &mut R, family: RandomFamily) -> Result<Representation> {
    match family {
        RandomFamily::RotationsAndPowers => {
            let pieces = rng.gen_range(2..5);
            let h = random_pl_homeo(rng, pieces);
            let (m, n) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
            genus2([random_rotation(rng, 12), random_rotation(rng, 12), h.power(m), h.power(n)])
        }
        RandomFamily::PlDouble => {
            let (pa, pb) = (rng.gen_range(2..4), rng.gen_range(2..4));
            let a1 = random_pl_homeo(rng, pa);
            let b1 = random_pl_homeo(rng, pb);
            let c = b1.invert().compose(&a1.invert()).compose(&b1).compose(&a1);
            let h = c.power(rng.gen_range(-1..=1));
            let (a2, b2) = (b1.conjugate_by(&h), a1.conjugate_by(&h));
            genus2([a1, b1, a2, b2])
        }
        RandomFamily::MobiusSolved | RandomFamily::MobiusConjugated => {
            let ms = loop {
                if let Some(ms) = solve_genus2_mobius(rng) {
                    break ms;
                }
            };
            let images = ms.map(|m| canonicalize(&LiftedMap::mobius(m, 0).expect("det 1")));
            let rep = genus2(images)?;
            if family == RandomFamily::MobiusConjugated {
                let pieces = rng.gen_range(2..5);
                rep.conjugate_by(&random_pl_homeo(rng, pieces))
            } else {
                Ok(rep)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn every_family_verifies() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for fam in RandomFamily::ALL {
            for _ in 0..3 {
                let rep = random_genus2_rep(&mut rng, fam).unwrap();
                assert!(rep.euler_number().unwrap().abs() <= 2);
            }
        }
    }

    #[test]
    fn mobius_solve_hits_nonzero_euler() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..40 {
            let rep = random_genus2_rep(&mut rng, RandomFamily::MobiusSolved).unwrap();
            seen.insert(rep.euler_number().unwrap());
        }
        assert!(seen.iter().any(|&e| e != 0), "{seen:?}");
    }
}
