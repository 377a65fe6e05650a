use std::f64::consts::PI;

use favard::geometry::{project_set, projected_centers};
use favard::multiplicity::{level_set, maximal_function, multiplicity_function};
use favard::salem::{rhs_overlap, rhs_overlap_direct, ExponentialSum};
use favard::selfsimilar::{disc_set, gasket_system};
use favard::IntervalUnion;
use proptest::prelude::*;

fn intervals() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec(
        (-10.0f64..10.0, 0.0f64..3.0).prop_map(|(a, w)| (a, a + w)),
        0..20,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn union_measure_is_subadditive(raw in intervals()) {
        let u = IntervalUnion::from_intervals(raw.iter().copied());
        let total: f64 = raw.iter().map(|(a, b)| b - a).sum();
        prop_assert!(u.measure() <= total + 1e-12);
        for w in u.intervals().windows(2) {
            prop_assert!(w[0].1 < w[1].0);
        }
        for &(a, b) in &raw {
            if b > a {
                prop_assert!(u.contains(0.5 * (a + b)));
            }
        }
    }

    #[test]
    fn intersection_is_inside_both(a in intervals(), b in intervals()) {
        let (u, v) = (IntervalUnion::from_intervals(a), IntervalUnion::from_intervals(b));
        let w = u.intersection(&v);
        prop_assert!(w.is_subset_of(&u, 1e-12));
        prop_assert!(w.is_subset_of(&v, 1e-12));
        prop_assert!((u.difference_measure(&v) + w.measure() - u.measure()).abs() < 1e-9);
    }

    #[test]
    fn level_sets_are_nested(theta in 0.0f64..PI, n in 1usize..6, k1 in 0.1f64..4.0, dk in 0.0f64..2.0) {
        let f = multiplicity_function(&disc_set(&gasket_system(), n).unwrap(), theta);
        let lo = level_set(&f, k1).unwrap();
        let hi = level_set(&f, k1 + dk).unwrap();
        prop_assert!(hi.is_subset_of(&lo, 1e-12));
        prop_assert!(lo.measure() <= f.integral() / k1 + 1e-12);
    }

    #[test]
    fn maximal_function_dominates(theta in 0.0f64..PI, n in 1usize..5) {
        let g = gasket_system();
        let star = maximal_function(&g, n, theta).unwrap();
        for level in 1..=n {
            let f = multiplicity_function(&disc_set(&g, level).unwrap(), theta);
            prop_assert!(level_set(&f, 1.0).unwrap().is_subset_of(&level_set(&star, 1.0).unwrap(), 1e-12));
        }
    }

    #[test]
    fn overlap_routes_agree(alphas in prop::collection::vec(-20.0f64..20.0, 1..40)) {
        let phases = vec![0.0; alphas.len()];
        let s = ExponentialSum::from_phases(alphas, &phases).unwrap();
        let (fast, slow) = (rhs_overlap(&s), rhs_overlap_direct(&s));
        prop_assert!((fast - slow).abs() <= 1e-9 * slow.max(1.0));
    }

    #[test]
    fn projections_shrink_with_level(theta in 0.0f64..PI, n in 1usize..7) {
        let g = gasket_system();
        let coarse = project_set(&disc_set(&g, n - 1).unwrap(), theta);
        let fine = project_set(&disc_set(&g, n).unwrap(), theta);
        prop_assert!(fine.is_subset_of(&coarse, 1e-12));
    }
}

#[test]
fn projected_centers_are_sorted_and_complete() {
    let set = disc_set(&gasket_system(), 5).unwrap();
    let p = projected_centers(&set, 0.9);
    assert_eq!(p.len(), 243);
    assert!(p.windows(2).all(|w| w[0] <= w[1]));
}
