mod common;

use common::{q, rng, Q};
use mdmatch_core::diagram::PersistenceDiagram;
use mdmatch_core::matching::{brute_force_bottleneck, d_match};
use mdmatch_core::random::{self, RandomValueSpec};
use mdmatch_core::{Extended, Scalar};
use proptest::prelude::*;

fn diagrams(seed: u64, count: usize, points: usize) -> Vec<PersistenceDiagram<Q>> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| random::diagram(&mut r, points, &RandomValueSpec::default()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn matches_brute_force(seed in any::<u64>()) {
        let d = diagrams(seed, 2, 6);
        prop_assert_eq!(d_match(&d[0], &d[1]), brute_force_bottleneck(&d[0], &d[1]).unwrap());
    }

    #[test]
    fn metric_axioms(seed in any::<u64>()) {
        let d = diagrams(seed, 3, 8);
        prop_assert_eq!(d_match(&d[0], &d[0]), Extended::Finite(Q::zero()));
        prop_assert_eq!(d_match(&d[0], &d[1]), d_match(&d[1], &d[0]));
        let via = match (d_match(&d[0], &d[1]), d_match(&d[1], &d[2])) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
            _ => Extended::Infinite,
        };
        prop_assert!(d_match(&d[0], &d[2]) <= via);
        if d_match(&d[0], &d[1]) == Extended::Finite(Q::zero()) {
            prop_assert_eq!(&d[0], &d[1]);
        }
    }

    #[test]
    fn affine_maps_scale_the_distance(seed in any::<u64>(), a in 1i64..=20, b in -20i64..=20) {
        let d = diagrams(seed, 2, 8);
        let (a, b) = (q(a, 3), q(b, 5));
        let map = |x: &PersistenceDiagram<Q>| x.map_increasing(|v| a.clone() * v.clone() + b.clone());
        prop_assert_eq!(d_match(&map(&d[0]), &map(&d[1])), d_match(&d[0], &d[1]).scale(&a));
    }

    #[test]
    fn float_and_rational_agree(seed in any::<u64>()) {
        let d = diagrams(seed, 2, 8);
        let float = |x: &PersistenceDiagram<Q>| {
            let points = x.points().map(|(p, m)| {
                let death = match p.death {
                    Extended::Finite(v) => Extended::Finite(v.to_f64()),
                    Extended::Infinite => Extended::Infinite,
                };
                (mdmatch_core::DiagramPoint::new(p.birth.to_f64(), death).unwrap(), m)
            });
            PersistenceDiagram::from_points(x.degree(), points).unwrap()
        };
        let exact = d_match(&d[0], &d[1]).to_f64();
        prop_assert_eq!(d_match(&float(&d[0]), &float(&d[1])).to_f64(), exact);
    }
}
