mod common;

use common::{input, q, rng, sum_one_pair, Q};
use mdmatch_core::complex::{simplex_value, sublevel};
use mdmatch_core::foliation::reduce_function;
use mdmatch_core::scalar::weakly_below;
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sublevels_are_full_subcomplexes(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let x = input::<Q>(&mut r, n);
        let bound: Vec<Q> = (0..n).map(|_| q(r.gen_range(0..=16), 4)).collect();
        let sub = sublevel(&x.complex, &x.filtration, &bound).unwrap();
        prop_assert!(sub.is_subcomplex_of(&x.complex));
        for s in x.complex.simplices() {
            let inside = s.iter().all(|&v| weakly_below(x.filtration.vertex_value(v), &bound));
            prop_assert_eq!(sub.contains(s), inside);
            let value = simplex_value(&x.complex, &x.filtration, s).unwrap();
            prop_assert_eq!(inside, weakly_below(&value, &bound));
        }
    }

    #[test]
    fn sublevels_grow_with_the_bound(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let x = input::<Q>(&mut r, n);
        let lower: Vec<Q> = (0..n).map(|_| q(r.gen_range(0..=16), 4)).collect();
        let upper: Vec<Q> = lower.iter().map(|l| l.clone() + q(r.gen_range(0..=8), 4)).collect();
        let a = sublevel(&x.complex, &x.filtration, &lower).unwrap();
        let b = sublevel(&x.complex, &x.filtration, &upper).unwrap();
        prop_assert!(a.is_subcomplex_of(&b));
    }

    #[test]
    fn leaf_sublevels_match_reduced_sublevels(seed in any::<u64>(), n in 2usize..=3, s in -16i64..=32) {
        let mut r = rng(seed);
        let x = input::<Q>(&mut r, n);
        let pair = sum_one_pair(&mut r, n);
        let reduced = reduce_function(&x.complex, &x.filtration, &pair).unwrap();
        let s = q(s, 4);
        let on_leaf = sublevel(&x.complex, &x.filtration, &pair.point(&s)).unwrap();
        prop_assert_eq!(on_leaf, reduced.sublevel(&x.complex, &s));
    }
}
