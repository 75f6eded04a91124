//! The acceptance battery, shared by the `acceptance` test target and the `suite` command.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::deform::{monitor_path, separating_twist_consistency, twist_consistency, uniform_grid, DeformationPath};
use crate::error::Error;
use crate::homeo::{
    attracting_point_of_product, canonicalize, classify, denjoy_blowup, find_contraction_power,
    fixed_point_alternative, CircleArc, CircleHomeo, CirclePoint, ContractionArcs, LiftedMap, Mat2,
};
use crate::numeric::{dyadic, gcd, rat, to_f64};
use crate::representation::random::{random_genus2_rep, random_mobius, random_mobius_matrix, random_pl_homeo, RandomFamily};
use crate::representation::{
    detect_fuchsian_torus, fuchsian_closed, fuchsian_once_punctured_torus, lifted_commutator_translation,
    subsurface_euler, verify_chain_order, verify_separation, RelatorStatus,
};
use crate::rotnum::{rotation_number, translation_number};
use crate::surface::{
    builtin_chain_genus2, four_holed_sphere_genus2, standard_pants_decomposition, Generator, SurfacePresentation, Word,
};

pub const DEFAULT_SEED: u64 = 20_240_917;

/// A failed check, or a library error raised while running one.
#[derive(Debug)]
struct Fail(String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(e.to_string())
    }
}

type Outcome = std::result::Result<String, Fail>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), Fail> {
    if cond {
        Ok(())
    } else {
        Err(Fail(msg()))
    }
}

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub budget: Duration,
    run: fn(u64) -> Outcome,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: String,
    /// Checks succeeded and the runtime is within budget.
    pub pass: bool,
    pub checks_passed: bool,
    pub within_budget: bool,
    pub elapsed_ms: u64,
    pub budget_ms: u64,
    pub detail: String,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "[{}] {} {} ({} ms / {} ms budget): {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_ms,
            self.budget_ms,
            self.detail
        )
    }
}

pub fn criteria() -> Vec<Criterion> {
    let c = |id, name, secs, run| Criterion {
        id,
        name,
        budget: Duration::from_secs(secs),
        run,
    };
    vec![
        c(1, "fuchsian-euler", 1, fuchsian_euler as fn(u64) -> Outcome),
        c(2, "milnor-wood", 30, milnor_wood),
        c(3, "additivity", 5, additivity),
        c(4, "four-holed-sphere", 2, four_holed_sphere),
        c(5, "order-laws", 5, order_laws),
        c(6, "fuchsian-torus", 1, fuchsian_torus),
        c(7, "bending-invariance", 10, bending_invariance),
        c(8, "rotation-engine", 10, rotation_engine),
        c(9, "contraction-dynamics", 5, contraction_dynamics),
    ]
}

pub fn run_criterion(c: &Criterion, seed: u64) -> CriterionReport {
    let start = Instant::now();
    let out = (c.run)(seed);
    let elapsed = start.elapsed();
    let within_budget = elapsed <= c.budget;
    let (checks_passed, detail) = match out {
        Ok(d) => (true, d),
        Err(Fail(d)) => (false, d),
    };
    CriterionReport {
        id: c.id,
        name: c.name.to_string(),
        pass: checks_passed && within_budget,
        checks_passed,
        within_budget,
        elapsed_ms: elapsed.as_millis() as u64,
        budget_ms: c.budget.as_millis() as u64,
        detail,
    }
}

/// All criteria, ordered by id. In parallel mode the criteria compete for cores, so
/// runtimes are less representative.
pub fn run_suite(seed: u64, parallel: bool) -> Vec<CriterionReport> {
    let all = criteria();
    let mut out: Vec<CriterionReport> = if parallel {
        all.par_iter().map(|c| run_criterion(c, seed)).collect()
    } else {
        all.iter().map(|c| run_criterion(c, seed)).collect()
    };
    out.sort_by_key(|r| r.id);
    out
}

fn fuchsian_euler(_seed: u64) -> Outcome {
    let mut parts = Vec::new();
    for g in 2..=4 {
        let rep = fuchsian_closed(g)?;
        let eu = rep.euler_number()?;
        let spread = match rep.status() {
            RelatorStatus::VerifiedExact => 0.0,
            RelatorStatus::VerifiedWithin { spread, .. } => spread,
            RelatorStatus::UnverifiedFree => f64::INFINITY,
        };
        let want = -(2 * g as i64 - 2);
        ensure(eu == want && spread < 1e-9, || format!("genus {g}: eu = {eu}, spread {spread:e}"))?;
        parts.push(format!("g={g} eu={eu} spread={spread:.1e}"));
    }
    Ok(parts.join("; "))
}

fn random_map<R: Rng>(rng: &mut R) -> CircleHomeo {
    match rng.gen_range(0..3) {
        0 => {
            let pieces = rng.gen_range(2..6);
            random_pl_homeo(rng, pieces)
        }
        1 => random_mobius(rng),
        _ => canonicalize(&LiftedMap::rotation(dyadic(rng.gen(), 20))),
    }
}

fn milnor_wood(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hist = BTreeMap::new();
    for i in 0..200 {
        let fam = RandomFamily::ALL[i % RandomFamily::ALL.len()];
        let rep = random_genus2_rep(&mut rng, fam)?;
        let eu = rep.euler_number()?;
        ensure(eu.abs() <= 2, || format!("sample {i} ({fam:?}): eu = {eu}"))?;
        *hist.entry(eu).or_insert(0) += 1;
    }
    let mut worst = 0.0f64;
    for i in 0..500 {
        // same kind on both sides keeps the commutator in a closed form
        let (f, g) = match i % 3 {
            0 => {
                let (p, q) = (rng.gen_range(2..6), rng.gen_range(2..6));
                (random_pl_homeo(&mut rng, p), random_pl_homeo(&mut rng, q))
            }
            1 => (random_mobius(&mut rng), random_mobius(&mut rng)),
            _ => (random_map(&mut rng), random_map(&mut rng)),
        };
        let c = g.lift().invert().compose(&f.lift().invert()).compose(g.lift()).compose(f.lift());
        let b = translation_number(&c, 1e-6, 1 << 22)?;
        ensure(b.lo >= -1.0 - 1e-9 && b.hi <= 1.0 + 1e-9, || {
            format!("commutator {i}: enclosure [{}, {}]", b.lo, b.hi)
        })?;
        worst = worst.max(b.lo.abs()).max(b.hi.abs());
    }
    Ok(format!("eu histogram {hist:?}; 500 commutators, max |rot| {worst:.6}"))
}

fn additivity(_seed: u64) -> Outcome {
    let mut parts = Vec::new();
    for g in [2, 3] {
        let rep = fuchsian_closed(g)?;
        let d = standard_pants_decomposition(&SurfacePresentation::new(g)?);
        let s = subsurface_euler(&rep, &d)?;
        let eu = rep.euler_number()?;
        ensure(s.contains(eu as f64, 0.0) && s.width() < 1e-6, || {
            format!("genus {g}: sum [{}, {}] vs eu {eu}", s.lo, s.hi)
        })?;
        parts.push(format!("g={g} sum=[{:.9}, {:.9}]", s.lo, s.hi));
    }
    let rep = fuchsian_closed(2)?;
    let s = four_holed_sphere_genus2();
    let x = subsurface_euler(&rep, &s.ab_cd)?;
    let y = subsurface_euler(&rep, &s.bc_da)?;
    ensure((x.mid() - y.mid()).abs() < 1e-6, || format!("moves disagree: {} vs {}", x.mid(), y.mid()))?;
    parts.push(format!("elementary move {:.9} vs {:.9}", x.mid(), y.mid()));
    Ok(parts.join("; "))
}

fn four_holed_sphere(_seed: u64) -> Outcome {
    let rep = fuchsian_closed(2)?;
    let s = four_holed_sphere_genus2();
    let e = subsurface_euler(&rep, &s.ab_cd)?;
    ensure(e.contains(-2.0, 0.0), || format!("enclosure [{}, {}] misses -2", e.lo, e.hi))?;
    for w in &s.boundary {
        let c = classify(&rep.evaluate_word(w)?, rep.tol())?;
        ensure(c.is_hyperbolic(), || format!("boundary {w} is {}", c.tag()))?;
    }
    Ok(format!("eu = [{:.9}, {:.9}], 4 hyperbolic boundaries", e.lo, e.hi))
}

fn order_laws(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = fuchsian_closed(2)?;
    let chain = builtin_chain_genus2();
    let mut reps = vec![base.clone()];
    for _ in 0..10 {
        let pieces = rng.gen_range(2..5);
        reps.push(base.conjugate_by(&random_pl_homeo(&mut rng, pieces))?);
    }
    for (k, rep) in reps.iter().enumerate() {
        ensure(verify_chain_order(rep, &chain)?, || format!("chain order fails on rep {k}"))?;
        for (j, p) in chain.words().windows(2).enumerate() {
            ensure(verify_separation(rep, &p[0], &p[1])?, || {
                format!("separation fails for γ{}, γ{} on rep {k}", j + 1, j + 2)
            })?;
        }
    }
    Ok("chain order and 4 separations on the Fuchsian rep and 10 PL conjugates".into())
}

fn fuchsian_torus(_seed: u64) -> Outcome {
    let t = fuchsian_once_punctured_torus(3.0)?;
    let v = lifted_commutator_translation(&t, &Word::gen(Generator::A(1)), &Word::gen(Generator::B(1)))?;
    let k = v.exact_integer();
    ensure(k.map(i64::abs) == Some(1), || format!("rot̃[a, b] = [{}, {}]", v.lo, v.hi))?;
    let rep = fuchsian_closed(2)?;
    let pres = SurfacePresentation::new(2)?;
    let w = detect_fuchsian_torus(&rep, &pres.handle_pairs())?.ok_or_else(|| Fail("no Fuchsian torus found".into()))?;
    Ok(format!(
        "punctured torus rot̃ = {}; genus 2 handle ({}, {}) gives {}",
        k.unwrap_or_default(),
        w.a,
        w.b,
        w.value
    ))
}

fn bending_invariance(_seed: u64) -> Outcome {
    let rep = fuchsian_closed(2)?;
    let probes: Vec<Word> = ["a1", "b1", "b1' a1' b1 a1"]
        .iter()
        .map(|s| Word::parse(s))
        .collect::<crate::Result<_>>()?;
    let grid = uniform_grid(33);
    let c = Word::commutator(&probes[0], &probes[1]);
    let b_side = vec![Generator::A(2), Generator::B(2)];
    let paths = [
        DeformationPath::bend_separating(rep.clone(), c.clone(), b_side.clone(), 1.0)?,
        DeformationPath::bend_nonseparating(rep.clone(), probes[0].clone(), Generator::B(1), 1.0)?,
        DeformationPath::bend_nonseparating(rep.clone(), Word::parse("b2'")?, Generator::A(2), -2.0)?,
    ];
    for p in &paths {
        let r = monitor_path(p, &probes, &grid)?;
        ensure(r.records.iter().all(|s| s.eu == -2), || format!("{}: eu not constant -2", r.kind))?;
    }
    let chain = builtin_chain_genus2();
    let mut worst = 0.0f64;
    for n in [-2, -1, 1, 2] {
        for i in [1, 2, 4] {
            let t = twist_consistency(&rep, &chain, i, n)?;
            ensure(t.defect < 1e-9, || format!("γ{i}, N = {n}: defect {:e}", t.defect))?;
            worst = worst.max(t.defect);
        }
        let t = separating_twist_consistency(&rep, &c, &b_side, n, chain.words())?;
        ensure(t.defect < 1e-9, || format!("separating, N = {n}: defect {:e}", t.defect))?;
        worst = worst.max(t.defect);
    }
    Ok(format!("3 paths x 33 samples at eu = -2; 16 twist endpoints, max defect {worst:.1e}"))
}

fn rotation_engine(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut exact = 0;
    for q in 1..=64i64 {
        for p in 0..q {
            if gcd(p, q) != 1 {
                continue;
            }
            let r = canonicalize(&LiftedMap::rotation(rat(p, q)));
            let pieces = rng.gen_range(2..4);
            let h = random_pl_homeo(&mut rng, pieces);
            for f in [r.clone(), r.conjugate_by(&h)] {
                let b = rotation_number(&f, 1e-9)?;
                ensure(b.exact == Some(rat(p, q)), || format!("{p}/{q}: got [{}, {}]", b.lo, b.hi))?;
                exact += 1;
            }
        }
    }
    for i in 0..100 {
        let alpha = dyadic(rng.gen(), 30);
        let r = canonicalize(&LiftedMap::rotation(alpha.clone()));
        let f = if i % 2 == 0 {
            let pieces = rng.gen_range(2..5);
            r.conjugate_by(&random_pl_homeo(&mut rng, pieces))
        } else {
            r.conjugate_by(&random_mobius(&mut rng))
        };
        let b = translation_number(f.lift(), 1e-4, 1 << 22)?;
        let a = to_f64(&alpha);
        ensure(b.contains(a, 0.0), || format!("conjugated rotation {i}: {a} not in [{}, {}]", b.lo, b.hi))?;
    }
    for i in 0..20 {
        let q = rng.gen_range(1..=6);
        let p = loop {
            let p = rng.gen_range(0..q);
            if gcd(p, q) == 1 {
                break p;
            }
        };
        let pieces = rng.gen_range(2..4);
        let f = canonicalize(&LiftedMap::rotation(rat(p, q))).conjugate_by(&random_pl_homeo(&mut rng, pieces));
        let start = rat(rng.gen_range(0..64), 64);
        let weights: Vec<_> = (0..q).map(|_| rat(rng.gen_range(1..4), 16 * q)).collect();
        let b = denjoy_blowup(&f, &start, &weights)?;
        let r = rotation_number(&b.map, 1e-9)?;
        ensure(r.exact == Some(rat(p, q)), || format!("blowup {i} of {p}/{q}: [{}, {}]", r.lo, r.hi))?;
    }
    Ok(format!("{exact} exact certificates; 100 enclosures sound; 20 blowups keep rot"))
}

fn contraction_dynamics(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = 1e-9;
    let mut powers = Vec::new();
    let mut done = 0;
    while done < 20 {
        let m = random_mobius_matrix(&mut rng);
        let a = m * Mat2::diag(rng.gen_range(1.3..3.0)) * m.inverse();
        let f = canonicalize(&LiftedMap::mobius(a, 0)?);
        let g = random_mobius(&mut rng);
        let cls = classify(&f, tol)?;
        let (fp, fm) = cls.hyperbolic_points().ok_or_else(|| Fail("f is not hyperbolic".into()))?;
        let (fp, fm) = (fp.angle(), fm.angle());
        let g_inv = g.invert();
        let (vm, vp) = (g_inv.eval(fm), g.eval(fp));
        let gap = |x: f64, y: f64| CirclePoint::approx(x, 0.0).distance(&CirclePoint::approx(y, 0.0));
        if gap(vm, fp) < 0.05 || gap(vp, fm) < 0.05 {
            // near the exchanging case the needed powers grow without bound
            continue;
        }
        let r = 0.02;
        let arcs = ContractionArcs {
            u_minus: CircleArc::centered(fm, r)?,
            u_plus: CircleArc::centered(fp, r)?,
            v_minus: CircleArc::centered(vm, r)?,
            v_plus: CircleArc::centered(vp, r)?,
        };
        let cert = find_contraction_power(&f, &g, &arcs, 400, tol)?;
        fixed_point_alternative(&f, &g, 400, tol)?;
        let target = CirclePoint::approx(fp, 0.0);
        let d = [5, 10, 20]
            .iter()
            .map(|&n| Ok(attracting_point_of_product(&f, &g, n, tol)?.distance(&target)))
            .collect::<std::result::Result<Vec<_>, Fail>>()?;
        ensure(d[1] <= d[0] + 1e-12 && d[2] <= d[1] + 1e-12, || format!("pair {done}: distances {d:?}"))?;
        powers.push(cert.power);
        done += 1;
    }
    Ok(format!("20 pairs certified; contraction powers {powers:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_criteria_pass() {
        for c in criteria().iter().filter(|c| matches!(c.id, 1 | 4 | 6)) {
            let r = run_criterion(c, DEFAULT_SEED);
            assert!(r.checks_passed, "{}", r.line());
        }
    }
}
