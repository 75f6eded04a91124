use circlerig::homeo::{
    canonicalize, classify, denjoy_blowup, find_contraction_power, one_parameter_flow, CircleArc, CircleHomeo,
    CirclePoint, ContractionArcs, LiftedMap, Mat2,
};
use circlerig::numeric::{gcd, rat};
use circlerig::representation::random::{random_mobius, random_mobius_matrix, random_pl_homeo};
use circlerig::rotnum::rotation_number;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn hyperbolic<R: Rng>(rng: &mut R) -> CircleHomeo {
    let m = random_mobius_matrix(rng);
    let a = m * Mat2::diag(rng.gen_range(1.3..3.0)) * m.inverse();
    canonicalize(&LiftedMap::mobius(a, 0).unwrap())
}

/// PL, Möbius, rotation, or a composite of two of them.
fn any_map<R: Rng>(rng: &mut R) -> CircleHomeo {
    match rng.gen_range(0..4) {
        0 => {
            let pieces = rng.gen_range(1..6);
            random_pl_homeo(rng, pieces)
        }
        1 => random_mobius(rng),
        2 => canonicalize(&LiftedMap::rotation(rat(rng.gen_range(0..97), 97))),
        _ => random_pl_homeo(rng, 3).compose(&random_mobius(rng)),
    }
}

fn sup_diff(f: &LiftedMap, g: &LiftedMap, rng: &mut ChaCha8Rng) -> f64 {
    (0..100)
        .map(|_| {
            let x = rng.gen_range(-3.0..3.0);
            (f.eval(x) - g.eval(x)).abs()
        })
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lifts_commute_with_unit_translation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = any_map(&mut rng);
        for _ in 0..100 {
            let x: f64 = rng.gen_range(-5.0..5.0);
            let d = (f.lift().eval(x + 1.0) - f.lift().eval(x) - 1.0).abs();
            if f.lift().is_exact() {
                let q = rat(rng.gen_range(-500..500), 97);
                let l = f.lift();
                prop_assert_eq!(l.eval_exact(&(&q + rat(1, 1))).unwrap(), l.eval_exact(&q).unwrap() + rat(1, 1));
            } else {
                prop_assert!(d < 1e-12 * (1.0 + x.abs()), "defect {}", d);
            }
        }
    }

    #[test]
    fn group_laws_hold_pointwise(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, g, h) = (any_map(&mut rng), any_map(&mut rng), any_map(&mut rng));
        let (f, g, h) = (f.lift(), g.lift(), h.lift());
        prop_assert!(sup_diff(&f.compose(g).compose(h), &f.compose(&g.compose(h)), &mut rng) < 1e-9);
        prop_assert!(sup_diff(&f.compose(&f.invert()), &LiftedMap::identity(), &mut rng) < 1e-9);
        prop_assert!(sup_diff(&f.invert().compose(f), &LiftedMap::identity(), &mut rng) < 1e-9);
        let (m, n) = (rng.gen_range(-3..4), rng.gen_range(-3..4));
        prop_assert!(sup_diff(&f.power(m + n), &f.power(m).compose(&f.power(n)), &mut rng) < 1e-9);
    }

    #[test]
    fn classification_is_conjugation_covariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = if rng.gen_bool(0.5) { hyperbolic(&mut rng) } else { random_pl_homeo(&mut rng, 4) };
        let pieces = rng.gen_range(2..5);
        let c = random_pl_homeo(&mut rng, pieces);
        let Ok(before) = classify(&f, 1e-9) else { return Ok(()) };
        let after = classify(&f.conjugate_by(&c), 1e-9).unwrap();
        prop_assert_eq!(before.tag(), after.tag());
        let mut want: Vec<f64> = before.fixed_points().iter().map(|p| {
            let y = c.eval(p.angle());
            y - y.floor()
        }).collect();
        let mut got: Vec<f64> = after.fixed_points().iter().map(CirclePoint::angle).collect();
        want.sort_by(f64::total_cmp);
        got.sort_by(f64::total_cmp);
        prop_assert_eq!(want.len(), got.len());
        for (a, b) in want.iter().zip(&got) {
            let d = CirclePoint::approx(*a, 0.0).distance(&CirclePoint::approx(*b, 0.0));
            prop_assert!(d < 1e-8, "{} vs {}", a, b);
        }
    }

    #[test]
    fn flows_are_one_parameter_groups(seed in any::<u64>(), s in -1.5f64..1.5, t in -1.5f64..1.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = match rng.gen_range(0..3) {
            0 => hyperbolic(&mut rng),
            1 => {
                // a parabolic through a random direction
                let m = random_mobius_matrix(&mut rng);
                canonicalize(&LiftedMap::mobius(m * Mat2::new(1.0, rng.gen_range(0.2..2.0), 0.0, 1.0) * m.inverse(), 0).unwrap())
            }
            _ => random_pl_homeo(&mut rng, 3),
        };
        let Ok(flow) = one_parameter_flow(&f) else { return Ok(()) };
        prop_assert!(flow.at(1.0).sup_distance(&f, 512) < 1e-9);
        let lhs = flow.at(s).compose(&flow.at(t));
        prop_assert!(lhs.sup_distance(&flow.at(s + t), 512) < 1e-9);
    }

    #[test]
    fn blowup_keeps_the_rotation_number(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = rng.gen_range(1..=6i64);
        let p = (0..q).find(|&p| gcd(p, q) == 1 && rng.gen_bool(0.5)).unwrap_or(if q == 1 { 0 } else { 1 });
        let f = canonicalize(&LiftedMap::rotation(rat(p, q))).conjugate_by(&random_pl_homeo(&mut rng, 3));
        let weights: Vec<_> = (0..q).map(|_| rat(rng.gen_range(1..4), 16 * q)).collect();
        let b = denjoy_blowup(&f, &rat(rng.gen_range(0..64), 64), &weights).unwrap();
        let before = rotation_number(&f, 1e-9).unwrap();
        let after = rotation_number(&b.map, 1e-9).unwrap();
        prop_assert_eq!(before.exact.clone(), Some(rat(p, q)));
        prop_assert_eq!(after.exact, before.exact);
    }

    #[test]
    fn contraction_containments_hold_on_samples(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = hyperbolic(&mut rng);
        let g = if rng.gen_bool(0.5) { random_mobius(&mut rng) } else { random_pl_homeo(&mut rng, 3) };
        let c = classify(&f, 1e-9).unwrap();
        let (fp, fm) = c.hyperbolic_points().unwrap();
        let (fp, fm) = (fp.angle(), fm.angle());
        let r = 0.03;
        let arcs = ContractionArcs {
            u_minus: CircleArc::centered(fm, r).unwrap(),
            u_plus: CircleArc::centered(fp, r).unwrap(),
            v_minus: CircleArc::centered(g.invert().eval(fm), r).unwrap(),
            v_plus: CircleArc::centered(g.eval(fp), r).unwrap(),
        };
        let Ok(cert) = find_contraction_power(&f, &g, &arcs, 400, 1e-9) else { return Ok(()) };
        let n = cert.power as i64;
        let forward = f.lift().power(n).compose(g.lift());
        let backward = g.lift().compose(&f.lift().power(n));
        // independent check: sample the closed complements directly
        let (va, vlen) = (arcs.v_minus.end(), 1.0 - arcs.v_minus.len);
        let (ua, ulen) = (arcs.u_minus.end(), 1.0 - arcs.u_minus.len);
        for i in 0..=400 {
            let s = i as f64 / 400.0;
            let x = forward.eval(va + s * vlen);
            prop_assert!(arcs.u_plus.contains(x - x.floor()));
            let y = backward.eval(ua + s * ulen);
            prop_assert!(arcs.v_plus.contains(y - y.floor()));
        }
    }
}
