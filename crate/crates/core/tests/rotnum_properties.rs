use circlerig::homeo::{CircleHomeo, LiftedMap};
use circlerig::numeric::rat;
use circlerig::representation::random::{random_mobius, random_pl_homeo};
use circlerig::rotnum::{translation_number, DEFAULT_MAX_ITER};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_map(rng: &mut ChaCha8Rng) -> CircleHomeo {
    if rng.gen_bool(0.5) {
        let pieces = rng.gen_range(1..6);
        random_pl_homeo(rng, pieces)
    } else {
        random_mobius(rng)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn conjugated_rational_rotations_are_enclosed(seed in any::<u64>(), q in 1i64..200) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = rng.gen_range(-2 * q..2 * q);
        let pieces = rng.gen_range(1..5);
        let h = random_pl_homeo(&mut rng, pieces);
        let lift = h.lift().compose(&LiftedMap::rotation(rat(p, q))).compose(&h.lift().invert());
        let b = translation_number(&lift, 1e-5, DEFAULT_MAX_ITER).unwrap();
        prop_assert!(b.contains(p as f64 / q as f64, 0.0), "{}/{} not in [{}, {}]", p, q, b.lo, b.hi);
        if let Some(e) = &b.exact {
            prop_assert_eq!(e, &rat(p, q));
        }
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn translation_number_is_homogeneous(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_map(&mut rng).lift().shift(rng.gen_range(-2..3));
        let tol = 1e-5;
        let base = translation_number(&f, tol, DEFAULT_MAX_ITER).unwrap();
        for n in [2i64, 3, 5] {
            let b = translation_number(&f.power(n), tol, DEFAULT_MAX_ITER).unwrap();
            let scaled = base.scale(n);
            let slack = 1e-12;
            prop_assert!(b.lo <= scaled.hi + slack && scaled.lo <= b.hi + slack,
                "n = {}: [{}, {}] vs n·[{}, {}]", n, b.lo, b.hi, base.lo, base.hi);
        }
    }

    #[test]
    fn lifted_commutators_are_bounded(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, g) = (random_map(&mut rng), random_map(&mut rng));
        // any lifts give the same commutator
        let (f, g) = (f.lift().shift(rng.gen_range(-3..4)), g.lift().shift(rng.gen_range(-3..4)));
        let c = g.invert().compose(&f.invert()).compose(&g).compose(&f);
        let b = translation_number(&c, 1e-5, DEFAULT_MAX_ITER).unwrap();
        prop_assert!(b.lo >= -1.0 - 1e-9 && b.hi <= 1.0 + 1e-9, "[{}, {}]", b.lo, b.hi);
    }
}
