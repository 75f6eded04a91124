//! Bending along separating and nonseparating curves.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homeo::{one_parameter_flow, CircleHomeo, Flow};
use crate::representation::Representation;
use crate::surface::{algebraic_intersection, dehn_twist, separating_twist, DirectedChain, Generator, Word};

/// Grid size for the commutation check.
pub const COMMUTE_GRID: usize = 256;

/// Samples used when comparing maps pointwise.
pub const COMPARE_GRID: usize = 1024;

pub(crate) fn check_commutes(f: &CircleHomeo, c: &CircleHomeo, tol: f64) -> Result<()> {
    let defect = f.compose(c).sup_distance(&c.compose(f), COMMUTE_GRID);
    if defect > tol {
        return Err(Error::NotCommuting { defect });
    }
    Ok(())
}

/// `ρ_t` equal to `ρ` on the A side and to `f_t ρ f_t⁻¹` on `b_side`, with `f_t = flow(t)`.
pub fn bend_separating(
    rep: &Representation,
    c: &Word,
    b_side: &[Generator],
    flow: &Flow,
    t: f64,
) -> Result<Representation> {
    if b_side.is_empty() {
        return Err(Error::PreconditionViolated("empty B side".into()));
    }
    let rc = rep.evaluate_word(c)?;
    let ft = flow.at(t);
    check_commutes(&ft, &rc, rep.tol())?;
    if t == 0.0 {
        return Ok(rep.clone());
    }
    let mut images = rep.images().clone();
    for &g in b_side {
        let f = rep.image(g)?;
        images.insert(g, f.conjugate_by(&ft));
    }
    rep.with_images(images)
}

/// `i(a, b)` for a nonseparating bend; must be ±1.
pub fn declared_sign(a: &Word, partner: Generator) -> Result<i64> {
    let i = algebraic_intersection(a, &Word::gen(partner));
    if i.abs() != 1 {
        return Err(Error::PreconditionViolated(format!("i({a}, {partner}) = {i}, expected ±1")));
    }
    Ok(i)
}

/// `ρ_t(b) = f_t ∘ ρ(b)` for the partner generator `b`, everything else unchanged.
pub fn bend_nonseparating(rep: &Representation, a: &Word, partner: Generator, flow: &Flow, t: f64) -> Result<Representation> {
    declared_sign(a, partner)?;
    if a.letters().iter().any(|(g, _)| *g == partner) {
        return Err(Error::PreconditionViolated(format!("{a} contains its partner {partner}")));
    }
    let ra = rep.evaluate_word(a)?;
    let ft = flow.at(t);
    check_commutes(&ft, &ra, rep.tol())?;
    if t == 0.0 {
        return Ok(rep.clone());
    }
    let mut images = rep.images().clone();
    images.insert(partner, ft.compose(rep.image(partner)?));
    rep.with_images(images)
}

/// The other generator of the handle of a single-letter curve.
pub fn handle_partner(a: &Word) -> Option<Generator> {
    match a.letters() {
        [(Generator::A(i), 1 | -1)] => Some(Generator::B(*i)),
        [(Generator::B(i), 1 | -1)] => Some(Generator::A(*i)),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwistCheck {
    /// Description of the bend, e.g. `nonseparating γ2` or `separating A' a' A a`.
    pub curve: String,
    pub power: i64,
    /// Largest circle distance between `ρ_1(w)` and `ρ(τ(w))` over the compared words.
    pub defect: f64,
    pub words: Vec<Word>,
}

fn defect(rep: &Representation, bent: &Representation, pairs: &[(Word, Word)]) -> Result<f64> {
    pairs.iter().try_fold(0.0f64, |m, (w, tw)| {
        Ok(m.max(bent.evaluate_word(w)?.sup_distance(&rep.evaluate_word(tw)?, COMPARE_GRID)))
    })
}

/// Bends along `γ_i` with `flow(1) = ρ(γ_i)^n` and compares with the twist substitution of
/// power `-n` on every chain word. `γ_i` must be a single generator letter.
pub fn twist_consistency(rep: &Representation, chain: &DirectedChain, i: usize, n: i64) -> Result<TwistCheck> {
    let gamma = chain.get(i)?;
    let partner = handle_partner(gamma)
        .ok_or_else(|| Error::PreconditionViolated(format!("γ{i} = {gamma} is not a generator letter")))?;
    let flow = one_parameter_flow(&rep.evaluate_word(gamma)?)?;
    let bent = bend_nonseparating(rep, gamma, partner, &flow, n as f64)?;
    let twisted = dehn_twist(chain, i, -n)?.realize(chain);
    let pairs: Vec<_> = chain.words().iter().cloned().zip(twisted).collect();
    Ok(TwistCheck {
        curve: format!("nonseparating γ{i}"),
        power: n,
        defect: defect(rep, &bent, &pairs)?,
        words: chain.words().to_vec(),
    })
}

/// Bends along a separating `c` with `flow(1) = ρ(c)^n` and compares with the twist
/// `x ↦ cⁿ x c⁻ⁿ` on the far side, over all generators and the given extra words.
pub fn separating_twist_consistency(
    rep: &Representation,
    c: &Word,
    b_side: &[Generator],
    n: i64,
    extra: &[Word],
) -> Result<TwistCheck> {
    let flow = one_parameter_flow(&rep.evaluate_word(c)?)?;
    let bent = bend_separating(rep, c, b_side, &flow, n as f64)?;
    let tau = separating_twist(c, b_side, n);
    let words: Vec<Word> = rep.generators().into_iter().map(Word::gen).chain(extra.iter().cloned()).collect();
    let pairs: Vec<_> = words.iter().map(|w| (w.clone(), tau.apply(w))).collect();
    Ok(TwistCheck {
        curve: format!("separating {c}"),
        power: n,
        defect: defect(rep, &bent, &pairs)?,
        words,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representation::fuchsian_closed;
    use crate::rotnum::rotation_number;
    use crate::surface::builtin_chain_genus2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn nonseparating_twist_endpoints() {
        let rep = fuchsian_closed(2).unwrap();
        let chain = builtin_chain_genus2();
        for i in [1, 2, 4] {
            for n in [-2, -1, 1, 2] {
                let c = twist_consistency(&rep, &chain, i, n).unwrap();
                assert!(c.defect < 1e-9, "γ{i} N={n}: {}", c.defect);
            }
        }
        assert!(twist_consistency(&rep, &chain, 3, 1).is_err());
    }

    #[test]
    fn separating_twist_endpoints() {
        let rep = fuchsian_closed(2).unwrap();
        let chain = builtin_chain_genus2();
        let c = w("A' a' A a");
        for n in [-2, -1, 1, 2] {
            let r = separating_twist_consistency(&rep, &c, &[Generator::A(2), Generator::B(2)], n, chain.words()).unwrap();
            assert!(r.defect < 1e-9, "N={n}: {}", r.defect);
        }
    }

    #[test]
    fn endpoint_is_composition() {
        let rep = fuchsian_closed(2).unwrap();
        let a = w("a1");
        let flow = one_parameter_flow(&rep.evaluate_word(&a).unwrap()).unwrap();
        let bent = bend_nonseparating(&rep, &a, Generator::B(1), &flow, 2.0).unwrap();
        let d = bent
            .image(Generator::B(1))
            .unwrap()
            .sup_distance(&rep.evaluate_word(&w("a1 a1 b1")).unwrap(), COMPARE_GRID);
        assert!(d < 1e-9);
        assert_eq!(bent.euler_number().unwrap(), -2);
    }

    #[test]
    fn separating_endpoint_keeps_rotation_numbers() {
        let rep = fuchsian_closed(2).unwrap();
        let c = w("A' a' A a");
        let flow = one_parameter_flow(&rep.evaluate_word(&c).unwrap()).unwrap();
        let bent = bend_separating(&rep, &c, &[Generator::A(2), Generator::B(2)], &flow, 1.0).unwrap();
        let gens = rep.generators();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let p = Word::from_syllables(
                (0..4).map(|_| (gens[rng.gen_range(0..gens.len())], if rng.gen_bool(0.5) { 1 } else { -1 })),
            );
            let x = rotation_number(&rep.evaluate_word(&p).unwrap(), 1e-9).unwrap();
            let y = rotation_number(&bent.evaluate_word(&p).unwrap(), 1e-9).unwrap();
            let d = x.mid() - y.mid();
            assert!((d - d.round()).abs() < 1e-6, "{p}");
        }
    }

    #[test]
    fn non_commuting_flow_is_rejected() {
        let rep = fuchsian_closed(2).unwrap();
        let flow = one_parameter_flow(rep.image(Generator::A(2)).unwrap()).unwrap();
        assert!(matches!(
            bend_nonseparating(&rep, &w("a1"), Generator::B(1), &flow, 0.5),
            Err(Error::NotCommuting { .. })
        ));
        assert!(matches!(
            bend_nonseparating(&rep, &w("a1"), Generator::A(2), &flow, 0.5),
            Err(Error::PreconditionViolated(_))
        ));
    }
}
