//! Finite simplicial complexes and vertex-valued filtering functions.
//!
//! A filtering function is given on vertices and extended to every simplex
//! by the componentwise maximum, so each sublevel set `X⟨φ ⪯ u⟩` is the full
//! subcomplex spanned by the vertices whose value lies below `u`.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::scalar::{weakly_below, Scalar};

/// Default cap on simplex dimension accepted by [`ComplexBuilder`].
pub const DEFAULT_MAX_DIMENSION: usize = 3;

pub type Simplex = Vec<usize>;

/// A face-closed finite simplicial complex.
///
/// Simplices are stored sorted by dimension and then lexicographically; this
/// flat order is the index space used by [`ScalarFiltration`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    simplices: Vec<Simplex>,
    /// `dim_offsets[d]..dim_offsets[d + 1]` is the range of `d`-simplices.
    dim_offsets: Vec<usize>,
    index: HashMap<Simplex, usize>,
}

#[derive(Clone, Debug)]
pub struct ComplexBuilder {
    max_dimension: usize,
    vertex_count: Option<usize>,
}

impl Default for ComplexBuilder {
    fn default() -> Self {
        ComplexBuilder {
            max_dimension: DEFAULT_MAX_DIMENSION,
            vertex_count: None,
        }
    }
}

impl ComplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn max_dimension(mut self, max_dimension: usize) -> Self {
        self.max_dimension = max_dimension;
        self
    }

    /// Fixes the vertex count and adds every vertex `0..count` as a 0-simplex.
    pub fn vertex_count(mut self, count: usize) -> Self {
        self.vertex_count = Some(count);
        self
    }

    pub fn build<S: AsRef<[usize]>>(&self, simplices: &[S]) -> Result<SimplicialComplex> {
        if simplices.is_empty() && self.vertex_count.unwrap_or(0) == 0 {
            return Err(Error::EmptyComplex);
        }
        let mut all: BTreeSet<Simplex> = BTreeSet::new();
        let mut max_vertex = None;
        for raw in simplices {
            let raw = raw.as_ref();
            let mut sorted = raw.to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            if raw.is_empty() || sorted.len() != raw.len() {
                return Err(Error::InvalidSimplex(raw.to_vec()));
            }
            if sorted.len() - 1 > self.max_dimension {
                return Err(Error::DimensionTooLarge {
                    simplex: raw.to_vec(),
                    max: self.max_dimension,
                });
            }
            let top = *sorted.last().unwrap();
            if let Some(count) = self.vertex_count {
                if top >= count {
                    return Err(Error::VertexOutOfRange {
                        vertex: top,
                        vertex_count: count,
                    });
                }
            }
            max_vertex = max_vertex.max(Some(top));
            insert_with_faces(&mut all, sorted);
        }
        let vertex_count = match self.vertex_count {
            Some(count) => {
                all.extend((0..count).map(|v| vec![v]));
                count
            }
            None => max_vertex.map_or(0, |v| v + 1),
        };
        Ok(SimplicialComplex::from_closed_set(vertex_count, all))
    }
}

fn insert_with_faces(all: &mut BTreeSet<Simplex>, simplex: Simplex) {
    if all.contains(&simplex) {
        return;
    }
    if simplex.len() > 1 {
        for skip in 0..simplex.len() {
            let mut face = simplex.clone();
            face.remove(skip);
            insert_with_faces(all, face);
        }
    }
    all.insert(simplex);
}

/// Builds the face closure of `simplices` with the default dimension cap.
pub fn build_complex<S: AsRef<[usize]>>(simplices: &[S]) -> Result<SimplicialComplex> {
    ComplexBuilder::default().build(simplices)
}

impl SimplicialComplex {
    /// `simplices` must already be face-closed.
    fn from_closed_set(vertex_count: usize, simplices: impl IntoIterator<Item = Simplex>) -> Self {
        let mut simplices: Vec<Simplex> = simplices.into_iter().collect();
        simplices.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let top_dim = simplices.last().map_or(0, |s| s.len());
        let mut dim_offsets = vec![0; top_dim + 1];
        for (d, offset) in dim_offsets.iter_mut().enumerate() {
            *offset = simplices.partition_point(|s| s.len() <= d);
        }
        let index = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        SimplicialComplex {
            vertex_count,
            simplices,
            dim_offsets,
            index,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Top dimension, or `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.simplices.last().map(|s| s.len() - 1)
    }

    /// All simplices in the canonical flat order.
    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn simplices_of_dim(&self, dim: usize) -> &[Simplex] {
        match (self.dim_offsets.get(dim), self.dim_offsets.get(dim + 1)) {
            (Some(&start), Some(&end)) => &self.simplices[start..end],
            _ => &[],
        }
    }

    pub fn count_of_dim(&self, dim: usize) -> usize {
        self.simplices_of_dim(dim).len()
    }

    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        self.index.get(simplex).copied()
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        self.index.contains_key(simplex)
    }

    /// Subcomplex of simplices accepted by `keep`. The caller guarantees the
    /// predicate is closed under taking faces.
    pub(crate) fn filter_closed(&self, mut keep: impl FnMut(&[usize]) -> bool) -> Self {
        let kept = self.simplices.iter().filter(|s| keep(s)).cloned();
        SimplicialComplex::from_closed_set(self.vertex_count, kept)
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.simplices.iter().all(|s| other.contains(s))
    }
}

/// An `ℝⁿ`-valued filtering function given on vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorFiltration<T> {
    components: usize,
    values: Vec<Vec<T>>,
}

impl<T: Scalar> VectorFiltration<T> {
    pub fn new(components: usize, values: Vec<Vec<T>>) -> Result<Self> {
        if components == 0 {
            return Err(Error::Malformed(
                "filtering function needs at least one component".into(),
            ));
        }
        for row in &values {
            if row.len() != components {
                return Err(Error::LengthMismatch {
                    expected: components,
                    found: row.len(),
                });
            }
            if !row.iter().all(Scalar::is_finite) {
                return Err(Error::NonFiniteValue);
            }
        }
        Ok(VectorFiltration { components, values })
    }

    /// One-component filtration from scalar vertex values.
    pub fn scalar(values: Vec<T>) -> Result<Self> {
        Self::new(1, values.into_iter().map(|v| vec![v]).collect())
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn vertex_count(&self) -> usize {
        self.values.len()
    }

    pub fn vertex_value(&self, vertex: usize) -> &[T] {
        &self.values[vertex]
    }

    pub fn values(&self) -> &[Vec<T>] {
        &self.values
    }

    pub fn check_covers(&self, complex: &SimplicialComplex) -> Result<()> {
        if self.values.len() < complex.vertex_count() {
            return Err(Error::LengthMismatch {
                expected: complex.vertex_count(),
                found: self.values.len(),
            });
        }
        Ok(())
    }

    /// Applies `f` to every entry.
    pub fn map(&self, mut f: impl FnMut(&T) -> T) -> Self {
        VectorFiltration {
            components: self.components,
            values: self
                .values
                .iter()
                .map(|row| row.iter().map(&mut f).collect())
                .collect(),
        }
    }

    fn max_over(&self, simplex: &[usize]) -> Vec<T> {
        let mut acc = self.values[simplex[0]].clone();
        for &v in &simplex[1..] {
            for (a, b) in acc.iter_mut().zip(&self.values[v]) {
                if *b > *a {
                    *a = b.clone();
                }
            }
        }
        acc
    }
}

/// Componentwise maximum of `φ` over the vertices of `simplex`.
pub fn simplex_value<T: Scalar>(
    complex: &SimplicialComplex,
    filtration: &VectorFiltration<T>,
    simplex: &[usize],
) -> Result<Vec<T>> {
    if !complex.contains(simplex) {
        return Err(Error::UnknownSimplex(simplex.to_vec()));
    }
    filtration.check_covers(complex)?;
    Ok(filtration.max_over(simplex))
}

/// The subcomplex `K⟨φ ⪯ u⟩`.
pub fn sublevel<T: Scalar>(
    complex: &SimplicialComplex,
    filtration: &VectorFiltration<T>,
    bound: &[T],
) -> Result<SimplicialComplex> {
    filtration.check_covers(complex)?;
    if bound.len() != filtration.components() {
        return Err(Error::LengthMismatch {
            expected: filtration.components(),
            found: bound.len(),
        });
    }
    Ok(complex.filter_closed(|s| {
        s.iter()
            .all(|&v| weakly_below(filtration.vertex_value(v), bound))
    }))
}

/// Real values on every simplex of a complex, monotone under inclusion.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarFiltration<T> {
    values: Vec<T>,
}

impl<T: Scalar> ScalarFiltration<T> {
    /// `values[i]` belongs to `complex.simplices()[i]`.
    pub fn new(complex: &SimplicialComplex, values: Vec<T>) -> Result<Self> {
        if values.len() != complex.len() {
            return Err(Error::LengthMismatch {
                expected: complex.len(),
                found: values.len(),
            });
        }
        if !values.iter().all(Scalar::is_finite) {
            return Err(Error::NonFiniteValue);
        }
        for (i, simplex) in complex.simplices().iter().enumerate() {
            if simplex.len() < 2 {
                continue;
            }
            for skip in 0..simplex.len() {
                let mut face = simplex.clone();
                face.remove(skip);
                let f = complex.index_of(&face).expect("complex is face-closed");
                if values[f] > values[i] {
                    return Err(Error::NonMonotone(simplex.clone()));
                }
            }
        }
        Ok(ScalarFiltration { values })
    }

    /// Extends vertex values to simplices by taking the maximum.
    pub fn from_vertex_values(complex: &SimplicialComplex, vertex_values: &[T]) -> Result<Self> {
        if vertex_values.len() < complex.vertex_count() {
            return Err(Error::LengthMismatch {
                expected: complex.vertex_count(),
                found: vertex_values.len(),
            });
        }
        if !vertex_values.iter().all(Scalar::is_finite) {
            return Err(Error::NonFiniteValue);
        }
        let values = complex
            .simplices()
            .iter()
            .map(|s| {
                s[1..].iter().fold(vertex_values[s[0]].clone(), |acc, &v| {
                    T::max_of(&acc, &vertex_values[v])
                })
            })
            .collect();
        Ok(ScalarFiltration { values })
    }

    /// The scalar filtration of a one-component vector filtration.
    pub fn from_vector(
        complex: &SimplicialComplex,
        filtration: &VectorFiltration<T>,
    ) -> Result<Self> {
        if filtration.components() != 1 {
            return Err(Error::ComponentMismatch {
                left: filtration.components(),
                right: 1,
            });
        }
        let flat: Vec<T> = filtration
            .values()
            .iter()
            .map(|row| row[0].clone())
            .collect();
        Self::from_vertex_values(complex, &flat)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn value(&self, index: usize) -> &T {
        &self.values[index]
    }

    pub fn map(&self, f: impl FnMut(&T) -> T) -> Self {
        ScalarFiltration {
            values: self.values.iter().map(f).collect(),
        }
    }

    /// Distinct values in increasing order.
    pub fn critical_values(&self) -> Vec<T> {
        let mut values = self.values.clone();
        values.sort_by(|a, b| a.total_cmp(b));
        values.dedup();
        values
    }

    /// The sublevel complex `{σ : F(σ) ≤ bound}`.
    pub fn sublevel(&self, complex: &SimplicialComplex, bound: &T) -> SimplicialComplex {
        complex.filter_closed(|s| {
            let i = complex.index_of(s).expect("simplex of this complex");
            self.values[i] <= *bound
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_is_closed_under_faces() {
        let k = build_complex(&[vec![0, 1, 2]]).unwrap();
        assert_eq!(k.vertex_count(), 3);
        assert_eq!(k.count_of_dim(0), 3);
        assert_eq!(k.count_of_dim(1), 3);
        assert_eq!(k.count_of_dim(2), 1);
        assert_eq!(k.dimension(), Some(2));
    }

    #[test]
    fn isolated_vertices() {
        let k = build_complex(&[vec![0], vec![1]]).unwrap();
        assert_eq!(k.len(), 2);
        assert_eq!(k.count_of_dim(1), 0);
    }

    #[test]
    fn rejects_repeated_vertex_and_empty_input() {
        assert!(matches!(
            build_complex(&[vec![0, 0, 1]]),
            Err(Error::InvalidSimplex(_))
        ));
        assert!(matches!(
            build_complex::<Vec<usize>>(&[]),
            Err(Error::EmptyComplex)
        ));
        assert!(matches!(
            build_complex(&[Vec::<usize>::new()]),
            Err(Error::InvalidSimplex(_))
        ));
    }

    #[test]
    fn deduplicates_and_unsorted_input() {
        let k = build_complex(&[vec![1, 0], vec![0, 1], vec![0]]).unwrap();
        assert_eq!(k.simplices(), &[vec![0], vec![1], vec![0, 1]]);
    }

    #[test]
    fn dimension_cap_is_configurable() {
        let tet4 = vec![0, 1, 2, 3, 4];
        assert!(matches!(
            build_complex(&[tet4.clone()]),
            Err(Error::DimensionTooLarge { .. })
        ));
        let k = ComplexBuilder::new()
            .max_dimension(4)
            .build(&[tet4])
            .unwrap();
        assert_eq!(k.count_of_dim(4), 1);
        assert_eq!(k.count_of_dim(3), 5);
    }

    #[test]
    fn fixed_vertex_count_adds_vertices() {
        let k = ComplexBuilder::new()
            .vertex_count(4)
            .build(&[vec![0, 1]])
            .unwrap();
        assert_eq!(k.count_of_dim(0), 4);
        assert!(ComplexBuilder::new()
            .vertex_count(2)
            .build(&[vec![0, 2]])
            .is_err());
    }

    #[test]
    fn simplex_values_take_componentwise_max() {
        let k = build_complex(&[vec![0, 1, 2]]).unwrap();
        let phi =
            VectorFiltration::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(simplex_value(&k, &phi, &[0, 1, 2]).unwrap(), vec![1.0, 1.0]);
        assert_eq!(simplex_value(&k, &phi, &[1]).unwrap(), vec![1.0, 0.0]);

        let k = build_complex(&[vec![0, 1]]).unwrap();
        let phi = VectorFiltration::new(2, vec![vec![0.0, 5.0], vec![1.0, 2.0]]).unwrap();
        assert_eq!(simplex_value(&k, &phi, &[0, 1]).unwrap(), vec![1.0, 5.0]);
        let single = VectorFiltration::new(2, vec![vec![2.0, 3.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(simplex_value(&k, &single, &[0]).unwrap(), vec![2.0, 3.0]);
        assert!(matches!(
            simplex_value(&k, &phi, &[0, 2]),
            Err(Error::UnknownSimplex(_))
        ));
    }

    #[test]
    fn sublevel_examples() {
        let k = build_complex(&[vec![0, 1]]).unwrap();
        let phi = VectorFiltration::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let below = sublevel(&k, &phi, &[0.5, 0.5]).unwrap();
        assert_eq!(below.simplices(), &[vec![0]]);
        assert!(sublevel(&k, &phi, &[-1.0, 10.0]).unwrap().is_empty());
        assert_eq!(sublevel(&k, &phi, &[1.0, 0.0]).unwrap(), k);
    }

    #[test]
    fn scalar_filtration_rejects_non_monotone() {
        let k = build_complex(&[vec![0, 1]]).unwrap();
        assert!(ScalarFiltration::new(&k, vec![0.0, 0.0, 1.0]).is_ok());
        assert!(matches!(
            ScalarFiltration::new(&k, vec![0.0, 2.0, 1.0]),
            Err(Error::NonMonotone(_))
        ));
        assert!(ScalarFiltration::new(&k, vec![0.0, 2.0]).is_err());
    }

    #[test]
    fn vector_filtration_validates_shape() {
        assert!(VectorFiltration::new(2, vec![vec![0.0]]).is_err());
        assert!(VectorFiltration::new(1, vec![vec![f64::NAN]]).is_err());
        assert!(VectorFiltration::<f64>::new(0, vec![]).is_err());
    }
}
