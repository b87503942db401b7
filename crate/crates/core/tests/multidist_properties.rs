mod common;

use common::{input, rng, sibling};
use mdmatch_core::foliation::Scheme;
use mdmatch_core::multidist::{dmatch_nd, leaf_distance, FilteredComplex, GridSpec};
use mdmatch_core::{Extended, FieldSpec};
use proptest::prelude::*;

fn sup_norm(x: &FilteredComplex<f64>, y: &FilteredComplex<f64>) -> f64 {
    x.filtration
        .values()
        .iter()
        .zip(y.filtration.values())
        .flat_map(|(a, b)| a.iter().zip(b).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn grid_estimate_is_stable_and_symmetric(seed in any::<u64>(), n in 2usize..=3, k in 0usize..=1) {
        let mut r = rng(seed);
        let x = input::<f64>(&mut r, n);
        let y = sibling(&mut r, &x);
        let grid = GridSpec::new(2, 2, GridSpec::default_bound(&x, &y)).unwrap();
        let xy = dmatch_nd(&x, &y, k, Scheme::SumOne, &grid, FieldSpec::default()).unwrap();
        let yx = dmatch_nd(&y, &x, k, Scheme::SumOne, &grid, FieldSpec::default()).unwrap();
        prop_assert_eq!(&xy.value, &yx.value);
        let Extended::Finite(value) = xy.value else {
            return Err(TestCaseError::fail("shared complex gave an infinite distance"));
        };
        prop_assert!(value <= sup_norm(&x, &y) + 1e-9);
        let at_argmax = leaf_distance(&x, &y, k, &xy.argmax, FieldSpec::default()).unwrap();
        prop_assert_eq!(at_argmax, Extended::Finite(value));
    }

    #[test]
    fn refining_the_grid_never_lowers_the_estimate(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let x = input::<f64>(&mut r, n);
        let y = sibling(&mut r, &x);
        let bound = GridSpec::default_bound(&x, &y);
        let coarse = GridSpec::new(2, 1, bound).unwrap();
        let fine = GridSpec::new(4, 2, bound).unwrap();
        prop_assert!(fine.refines(&coarse));
        let a = dmatch_nd(&x, &y, 0, Scheme::UnitNorm, &coarse, FieldSpec::default()).unwrap();
        let b = dmatch_nd(&x, &y, 0, Scheme::UnitNorm, &fine, FieldSpec::default()).unwrap();
        prop_assert!(a.value <= b.value);
    }

    #[test]
    fn one_component_grid_equals_plain_matching(seed in any::<u64>(), k in 0usize..=1) {
        let mut r = rng(seed);
        let x = input::<f64>(&mut r, 1);
        let y = input::<f64>(&mut r, 1);
        let grid = GridSpec::new(3, 2, 1.0).unwrap();
        let est = dmatch_nd(&x, &y, k, Scheme::SumOne, &grid, FieldSpec::default()).unwrap();
        let plain = mdmatch_core::matching::d_match(
            &x.leaf_diagram(k, &est.argmax, FieldSpec::default()).unwrap(),
            &y.leaf_diagram(k, &est.argmax, FieldSpec::default()).unwrap(),
        );
        prop_assert_eq!(est.value, plain);
    }
}
