use circlerig::deform::DeformationPath;
use circlerig::representation::fuchsian_closed;
use circlerig::surface::{Generator, Word};
use proptest::prelude::*;

fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

fn circle_distance(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(1.0);
    d.min(1.0 - d)
}

fn path(kind: usize, scale: f64) -> (DeformationPath, Word) {
    let base = fuchsian_closed(2).unwrap();
    match kind {
        0 => (DeformationPath::bend_nonseparating(base, w("a1"), Generator::B(1), scale).unwrap(), w("a1")),
        1 => (DeformationPath::bend_nonseparating(base, w("b2"), Generator::A(2), scale).unwrap(), w("b2")),
        _ => {
            let c = Word::commutator(&w("a1"), &w("b1"));
            let p = DeformationPath::bend_separating(base, c.clone(), vec![Generator::A(2), Generator::B(2)], scale).unwrap();
            (p, c)
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn euler_number_constant_along_bending(kind in 0usize..3, scale in -2.0f64..2.0, t in 0.0f64..=1.0) {
        let (p, _) = path(kind, scale);
        prop_assert_eq!(p.at(t).unwrap().euler_number().unwrap(), -2);
    }

    #[test]
    fn bending_curve_image_is_unchanged(kind in 0usize..3, scale in -2.0f64..2.0, t in 0.0f64..=1.0) {
        let (p, c) = path(kind, scale);
        let before = p.base().evaluate_word(&c).unwrap();
        let after = p.at(t).unwrap().evaluate_word(&c).unwrap();
        for i in 0..64 {
            let x = i as f64 / 64.0;
            let d = circle_distance(before.eval(x), after.eval(x));
            prop_assert!(d < 1e-9, "x = {x}: {d:e}");
        }
    }
}
