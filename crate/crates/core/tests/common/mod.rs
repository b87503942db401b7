#![allow(dead_code)]

use mdmatch_core::foliation::{AdmissiblePair, Scheme};
use mdmatch_core::multidist::FilteredComplex;
use mdmatch_core::random::{self, RandomComplexSpec, RandomValueSpec};
use mdmatch_core::{Rational, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Q = Rational;

pub fn q(n: i64, d: i64) -> Q {
    Q::from_i64(n) / Q::from_i64(d)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn spec(rng: &mut ChaCha8Rng) -> RandomComplexSpec {
    RandomComplexSpec {
        vertices: rng.gen_range(3..=7),
        edge_probability: rng.gen_range(0.3..0.9),
        max_dimension: 2,
        max_simplices: Some(40),
    }
}

pub fn input<T: Scalar>(rng: &mut ChaCha8Rng, n: usize) -> FilteredComplex<T> {
    let spec = spec(rng);
    random::filtered_complex(rng, &spec, n, &RandomValueSpec::default())
}

/// Second filtration on the complex of `x`.
pub fn sibling<T: Scalar>(rng: &mut ChaCha8Rng, x: &FilteredComplex<T>) -> FilteredComplex<T> {
    let phi = random::vector_filtration(
        rng,
        x.complex.vertex_count(),
        x.components(),
        &RandomValueSpec::default(),
    );
    FilteredComplex::new(x.complex.clone(), phi).expect("same complex")
}

pub fn sum_one_pair(rng: &mut ChaCha8Rng, n: usize) -> AdmissiblePair<Q> {
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=6)).collect();
    let total: i64 = weights.iter().sum();
    let lambda = weights.iter().map(|&a| q(a, total)).collect();
    let mut beta: Vec<Q> = (0..n - 1).map(|_| q(rng.gen_range(-8..=8), 4)).collect();
    let closing = beta.iter().fold(Q::zero(), |acc, b| acc - b.clone());
    beta.push(closing);
    AdmissiblePair::new(Scheme::SumOne, lambda, beta).expect("admissible")
}
