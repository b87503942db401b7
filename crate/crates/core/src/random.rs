//! Seeded random inputs for property checks and the CLI.
//!
//! Complexes are clique complexes of Erdős–Rényi graphs: each edge is kept
//! with a fixed probability, then every clique up to the maximum dimension
//! becomes a simplex. Vertex values are uniform on a lattice `j / denominator`
//! so they are exact in both numeric modes and ties occur.

use rand::Rng;

use crate::complex::{ComplexBuilder, SimplicialComplex, VectorFiltration};
use crate::diagram::{DiagramPoint, PersistenceDiagram};
use crate::multidist::FilteredComplex;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct RandomComplexSpec {
    pub vertices: usize,
    pub edge_probability: f64,
    pub max_dimension: usize,
    /// Resample until the complex has at most this many simplices.
    pub max_simplices: Option<usize>,
}

impl Default for RandomComplexSpec {
    fn default() -> Self {
        RandomComplexSpec {
            vertices: 7,
            edge_probability: 0.5,
            max_dimension: 2,
            max_simplices: Some(40),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RandomValueSpec {
    /// Values are `j / denominator` with `j` uniform in `0..=levels`.
    pub levels: i64,
    pub denominator: i64,
}

impl Default for RandomValueSpec {
    fn default() -> Self {
        RandomValueSpec {
            levels: 16,
            denominator: 4,
        }
    }
}

impl RandomValueSpec {
    pub fn sample<T: Scalar, R: Rng>(&self, rng: &mut R) -> T {
        T::from_i64(rng.gen_range(0..=self.levels)) / T::from_i64(self.denominator)
    }
}

pub fn clique_complex<R: Rng>(rng: &mut R, spec: &RandomComplexSpec) -> SimplicialComplex {
    loop {
        let n = spec.vertices;
        let mut adjacent = vec![vec![false; n]; n];
        for a in 0..n {
            for b in a + 1..n {
                let keep = rng.gen_bool(spec.edge_probability);
                adjacent[a][b] = keep;
                adjacent[b][a] = keep;
            }
        }
        let mut cliques: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
        let mut frontier = cliques.clone();
        for _ in 0..spec.max_dimension {
            let mut next = Vec::new();
            for clique in &frontier {
                let last = *clique.last().expect("nonempty");
                for w in last + 1..n {
                    if clique.iter().all(|&c| adjacent[c][w]) {
                        let mut grown = clique.clone();
                        grown.push(w);
                        next.push(grown);
                    }
                }
            }
            cliques.extend(next.iter().cloned());
            frontier = next;
        }
        if spec.max_simplices.is_some_and(|cap| cliques.len() > cap) {
            continue;
        }
        return ComplexBuilder::new()
            .max_dimension(spec.max_dimension)
            .vertex_count(n)
            .build(&cliques)
            .expect("cliques form a valid complex");
    }
}

pub fn vector_filtration<T: Scalar, R: Rng>(
    rng: &mut R,
    vertex_count: usize,
    components: usize,
    values: &RandomValueSpec,
) -> VectorFiltration<T> {
    let rows = (0..vertex_count)
        .map(|_| (0..components).map(|_| values.sample(rng)).collect())
        .collect();
    VectorFiltration::new(components, rows).expect("well-formed rows")
}

pub fn filtered_complex<T: Scalar, R: Rng>(
    rng: &mut R,
    complex: &RandomComplexSpec,
    components: usize,
    values: &RandomValueSpec,
) -> FilteredComplex<T> {
    let k = clique_complex(rng, complex);
    let phi = vector_filtration(rng, k.vertex_count(), components, values);
    FilteredComplex::new(k, phi).expect("filtration covers complex")
}

/// Random diagram with at most `max_points` points in total (with
/// multiplicity), drawn from the value lattice.
pub fn diagram<T: Scalar, R: Rng>(
    rng: &mut R,
    max_points: usize,
    values: &RandomValueSpec,
) -> PersistenceDiagram<T> {
    let total = rng.gen_range(0..=max_points);
    let mut points = Vec::with_capacity(total);
    for _ in 0..total {
        let birth: T = values.sample(rng);
        if rng.gen_bool(0.25) {
            points.push((DiagramPoint::at_infinity(birth), 1));
        } else {
            let gap =
                T::from_i64(rng.gen_range(1..=values.levels)) / T::from_i64(values.denominator);
            let death = birth.clone() + gap;
            points.push((DiagramPoint::proper(birth, death).expect("positive gap"), 1));
        }
    }
    PersistenceDiagram::from_points(0, points).expect("valid points")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn same_seed_same_complex() {
        let spec = RandomComplexSpec::default();
        let a = clique_complex(&mut ChaCha8Rng::seed_from_u64(3), &spec);
        let b = clique_complex(&mut ChaCha8Rng::seed_from_u64(3), &spec);
        assert_eq!(a, b);
        assert!(a.len() <= 40);
        assert_eq!(a.count_of_dim(0), spec.vertices);
    }

    #[test]
    fn complete_graph_gives_full_simplex() {
        let spec = RandomComplexSpec {
            vertices: 4,
            edge_probability: 1.0,
            max_dimension: 3,
            max_simplices: None,
        };
        let k = clique_complex(&mut ChaCha8Rng::seed_from_u64(0), &spec);
        assert_eq!(k.len(), 15);
    }

    #[test]
    fn diagrams_respect_point_cap() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let d: PersistenceDiagram<f64> = diagram(&mut rng, 6, &RandomValueSpec::default());
            assert!(d.proper_count() + d.infinite_count() <= 6);
        }
    }
}
