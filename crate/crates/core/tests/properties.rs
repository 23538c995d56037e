use eqlf_core::io::{lineset_from_json, lineset_to_json};
use eqlf_core::lines::{construct, magnitude_pair, predict_norm_sq, ScalarSet};
use eqlf_core::mub::{build_complex_mubs, build_real_mubs, MubSet};
use eqlf_core::verify::{check_equiangular, check_two_valued};
use eqlf_core::Complex64;
use proptest::prelude::*;
use std::sync::OnceLock;

fn complex_mubs(d: usize) -> &'static MubSet {
    static CACHE: OnceLock<Vec<(usize, MubSet)>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        [2, 3, 4, 5, 7]
            .into_iter()
            .map(|d| (d, build_complex_mubs(d).unwrap()))
            .collect()
    });
    &all.iter().find(|(k, _)| *k == d).unwrap().1
}

fn scalar() -> impl Strategy<Value = Complex64> {
    (0.0..3.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, th)| Complex64::from_polar(r, th))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gram_is_two_valued(
        d in prop::sample::select(vec![2usize, 3, 4, 5, 7]),
        a in prop::collection::vec(scalar(), 1..=3),
    ) {
        let t = a.len();
        let ls = construct(complex_mubs(d), t, Some(a.clone()), None).unwrap();
        let expected = magnitude_pair(d, &a, None);
        let report = check_two_valued(&ls, expected, 1e-8).unwrap();
        prop_assert!(report.passed, "{}", report.to_text());
        let norm = predict_norm_sq(d, &ScalarSet::plain(&a), None);
        prop_assert!((report.norm_sq.unwrap() - norm).abs() <= 1e-9 * norm);
    }

    #[test]
    fn scaled_gram_is_two_valued(
        d in prop::sample::select(vec![3usize, 4, 5]),
        a in prop::collection::vec(scalar(), 1..=3),
        c_seed in prop::collection::vec(0.25..3.0f64, 3),
    ) {
        let t = a.len();
        let c: Vec<f64> = c_seed[..t].to_vec();
        let ls = construct(complex_mubs(d), t, Some(a.clone()), Some(c.clone())).unwrap();
        let expected = magnitude_pair(d, &a, Some(&c));
        prop_assert!(check_two_valued(&ls, expected, 1e-8).unwrap().passed);
        let norm = predict_norm_sq(d, &ScalarSet::scaled(&a, &c), Some(&c));
        let measured = ls.vectors().row_iter().map(eqlf_core::matrix::norm_sq).fold(0.0, f64::max);
        prop_assert!((measured - norm).abs() <= 1e-9 * norm);
    }

    #[test]
    fn intra_formula_matches_scalar_set_sum(a in prop::collection::vec(scalar(), 1..=4)) {
        let s = ScalarSet::plain(&a);
        let direct: f64 = s.values().iter().map(|v| v.norm_sqr() - 1.0).sum();
        let formula = magnitude_pair(4, &a, None).intra;
        prop_assert!((direct - formula).abs() <= 1e-9 * formula.max(1.0));
        prop_assert!((s.sum() - Complex64::new((a.len() + 1) as f64, 0.0)).norm() <= 1e-12 * (a.len() + 1) as f64 * 4.0);
    }

    #[test]
    fn equalized_real_roots_give_common_angle(c in 0.3..4.0f64, plus in any::<bool>()) {
        let [hi, lo] = eqlf_core::lines::solve_real_t1(4, c);
        let a = if plus { hi } else { lo };
        let mubs = build_real_mubs(4).unwrap();
        let ls = construct(&mubs, 1, Some(vec![Complex64::new(a, 0.0)]), Some(vec![c])).unwrap();
        let report = check_equiangular(&ls, 1e-8);
        prop_assert!(report.passed, "{}", report.to_text());
        prop_assert!((report.cosine.unwrap() - 1.0 / 3.0).abs() <= 1e-8);
    }

    #[test]
    fn json_round_trip_is_stable(d in prop::sample::select(vec![2usize, 3, 5]), a in prop::collection::vec(scalar(), 1..=2)) {
        let ls = construct(complex_mubs(d), a.len(), Some(a), None).unwrap();
        let text = lineset_to_json(&ls).unwrap();
        let back = lineset_from_json(&text).unwrap();
        prop_assert_eq!(&back, &ls);
        prop_assert_eq!(lineset_to_json(&back).unwrap(), text);
    }
}
