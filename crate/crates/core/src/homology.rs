//! Simplicial homology over `𝔽_p`: Betti numbers, one-parameter persistence,
//! and a direct linear-algebra evaluation of the rank invariant.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::complex::{sublevel, ScalarFiltration, Simplex, SimplicialComplex, VectorFiltration};
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, pivot_pairs, rank, FieldSpec, SparseColumn};
use crate::scalar::{strictly_below, Scalar};

/// Boundary of `simplex` with alternating signs, as `(row, ±1)` entries in the
/// index space given by `row_of`.
fn boundary_entries(simplex: &[usize], row_of: impl Fn(&[usize]) -> usize) -> SparseColumn {
    if simplex.len() < 2 {
        return Vec::new();
    }
    (0..simplex.len())
        .map(|skip| {
            let face: Simplex = simplex
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &v)| v)
                .collect();
            let sign = if skip % 2 == 0 { 1 } else { -1 };
            (row_of(&face), sign)
        })
        .collect()
}

/// Columns of `∂_dim` for `complex`, rows indexed by `(dim-1)`-simplices.
fn boundary_matrix(complex: &SimplicialComplex, dim: usize) -> (usize, Vec<SparseColumn>) {
    if dim == 0 {
        return (0, vec![Vec::new(); complex.count_of_dim(0)]);
    }
    let rows = index_map(complex.simplices_of_dim(dim - 1));
    let cols = complex
        .simplices_of_dim(dim)
        .iter()
        .map(|s| boundary_entries(s, |f| rows[f]))
        .collect();
    (rows.len(), cols)
}

fn index_map(simplices: &[Simplex]) -> HashMap<&[usize], usize> {
    simplices
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect()
}

/// `dim ker ∂_k − rank ∂_{k+1}`.
pub fn betti(complex: &SimplicialComplex, k: usize, field: FieldSpec) -> usize {
    let chains = complex.count_of_dim(k);
    if chains == 0 {
        return 0;
    }
    let (rows_k, cols_k) = boundary_matrix(complex, k);
    let (rows_up, cols_up) = boundary_matrix(complex, k + 1);
    chains - rank(rows_k, &cols_k, field) - rank(rows_up, &cols_up, field)
}

/// Birth/death pairs of one homology degree. Pairs with zero persistence
/// are not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct PersistencePairs<T> {
    pub degree: usize,
    pub finite: Vec<(T, T)>,
    pub essential: Vec<T>,
}

impl<T: Scalar> PersistencePairs<T> {
    /// Number of classes born at or before `u` and alive after `v`.
    pub fn rank_at(&self, u: &T, v: &T) -> usize {
        let finite = self.finite.iter().filter(|(b, d)| b <= u && d > v).count();
        let essential = self.essential.iter().filter(|b| *b <= u).count();
        finite + essential
    }
}

/// Simplex order used for the reduction: filtration value, then dimension,
/// then the vertex list.
pub fn filtration_order<T: Scalar>(
    complex: &SimplicialComplex,
    filtration: &ScalarFiltration<T>,
) -> Vec<usize> {
    let simplices = complex.simplices();
    let mut order: Vec<usize> = (0..simplices.len()).collect();
    order.sort_by(|&a, &b| {
        filtration
            .value(a)
            .total_cmp(filtration.value(b))
            .then_with(|| simplices[a].len().cmp(&simplices[b].len()))
            .then_with(|| simplices[a].cmp(&simplices[b]))
    });
    order
}

/// Persistence pairs in degree `k` via the default total order.
pub fn persistence_pairs<T: Scalar>(
    complex: &SimplicialComplex,
    filtration: &ScalarFiltration<T>,
    k: usize,
    field: FieldSpec,
) -> Result<PersistencePairs<T>> {
    check_filtration(complex, filtration)?;
    let order = filtration_order(complex, filtration);
    Ok(pairs_for_order(complex, filtration, k, field, &order))
}

/// Persistence pairs for a caller-supplied total order. The order must list
/// every simplex once, be nondecreasing in filtration value, and place each
/// face before its cofaces.
pub fn persistence_pairs_in_order<T: Scalar>(
    complex: &SimplicialComplex,
    filtration: &ScalarFiltration<T>,
    k: usize,
    field: FieldSpec,
    order: &[usize],
) -> Result<PersistencePairs<T>> {
    check_filtration(complex, filtration)?;
    let n = complex.len();
    if order.len() != n {
        return Err(Error::InvalidOrder(format!(
            "expected {n} entries, got {}",
            order.len()
        )));
    }
    let mut position = vec![usize::MAX; n];
    for (pos, &s) in order.iter().enumerate() {
        if s >= n || position[s] != usize::MAX {
            return Err(Error::InvalidOrder(format!(
                "entry {s} is repeated or out of range"
            )));
        }
        position[s] = pos;
    }
    for pair in order.windows(2) {
        if filtration
            .value(pair[0])
            .total_cmp(filtration.value(pair[1]))
            == Ordering::Greater
        {
            return Err(Error::InvalidOrder("filtration values decrease".into()));
        }
    }
    for (i, simplex) in complex.simplices().iter().enumerate() {
        for (face_row, _) in
            boundary_entries(simplex, |f| complex.index_of(f).expect("face-closed"))
        {
            if position[face_row] > position[i] {
                return Err(Error::InvalidOrder(format!(
                    "a face of {simplex:?} comes after it"
                )));
            }
        }
    }
    Ok(pairs_for_order(complex, filtration, k, field, order))
}

fn check_filtration<T>(complex: &SimplicialComplex, filtration: &ScalarFiltration<T>) -> Result<()>
where
    T: Scalar,
{
    if filtration.values().len() != complex.len() {
        return Err(Error::LengthMismatch {
            expected: complex.len(),
            found: filtration.values().len(),
        });
    }
    Ok(())
}

fn pairs_for_order<T: Scalar>(
    complex: &SimplicialComplex,
    filtration: &ScalarFiltration<T>,
    k: usize,
    field: FieldSpec,
    order: &[usize],
) -> PersistencePairs<T> {
    let simplices = complex.simplices();
    let mut position = vec![0; order.len()];
    for (pos, &s) in order.iter().enumerate() {
        position[s] = pos;
    }
    let columns: Vec<SparseColumn> = order
        .iter()
        .map(|&s| {
            boundary_entries(&simplices[s], |f| {
                position[complex.index_of(f).expect("face-closed")]
            })
        })
        .collect();
    let pivots = pivot_pairs(order.len(), &columns, field);
    let dim_of = |pos: usize| simplices[order[pos]].len() - 1;
    let value_of = |pos: usize| filtration.value(order[pos]).clone();

    let mut paired = vec![false; order.len()];
    let mut finite = Vec::new();
    for &(low, col) in &pivots {
        paired[low] = true;
        paired[col] = true;
        if dim_of(low) == k {
            let (birth, death) = (value_of(low), value_of(col));
            if birth < death {
                finite.push((birth, death));
            }
        }
    }
    let essential = (0..order.len())
        .filter(|&pos| !paired[pos] && dim_of(pos) == k)
        .map(value_of)
        .collect();
    finite.sort_by(|a: &(T, T), b: &(T, T)| a.0.total_cmp(&b.0).then_with(|| a.1.total_cmp(&b.1)));
    PersistencePairs {
        degree: k,
        finite,
        essential,
    }
}

/// Rank of `H_k(K⟨φ⪯u⟩) → H_k(K⟨φ⪯v⟩)` computed as
/// `dim(Z_k(K_u) + B_k(K_v)) − dim B_k(K_v)`.
pub fn rank_oracle<T: Scalar>(
    complex: &SimplicialComplex,
    filtration: &VectorFiltration<T>,
    k: usize,
    u: &[T],
    v: &[T],
    field: FieldSpec,
) -> Result<usize> {
    if !strictly_below(u, v) {
        return Err(Error::NotStrictlyBelow);
    }
    let lower = sublevel(complex, filtration, u)?;
    let upper = sublevel(complex, filtration, v)?;
    Ok(inclusion_rank(&lower, &upper, k, field))
}

/// Rank of the map in degree `k` induced by `lower ⊆ upper`.
pub fn inclusion_rank(
    lower: &SimplicialComplex,
    upper: &SimplicialComplex,
    k: usize,
    field: FieldSpec,
) -> usize {
    let lower_k = lower.simplices_of_dim(k);
    if lower_k.is_empty() {
        return 0;
    }
    let upper_k = upper.simplices_of_dim(k);
    let upper_rows = index_map(upper_k);

    let (rows, cols) = boundary_matrix(lower, k);
    let cycles: Vec<SparseColumn> = kernel_basis(rows, &cols, field)
        .into_iter()
        .map(|z| {
            z.into_iter()
                .map(|(i, c)| (upper_rows[lower_k[i].as_slice()], c))
                .collect()
        })
        .collect();
    let boundaries: Vec<SparseColumn> = upper
        .simplices_of_dim(k + 1)
        .iter()
        .map(|s| boundary_entries(s, |f| upper_rows[f]))
        .collect();

    let boundary_rank = rank(upper_k.len(), &boundaries, field);
    let mut combined = boundaries;
    combined.extend(cycles);
    rank(upper_k.len(), &combined, field) - boundary_rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;

    fn f2() -> FieldSpec {
        FieldSpec::default()
    }

    fn two_vertex_edge() -> (SimplicialComplex, ScalarFiltration<f64>) {
        let k = build_complex(&[vec![0, 1]]).unwrap();
        let f = ScalarFiltration::new(&k, vec![0.0, 0.0, 1.0]).unwrap();
        (k, f)
    }

    #[test]
    fn betti_examples() {
        let point = build_complex(&[vec![0]]).unwrap();
        assert_eq!(betti(&point, 0, f2()), 1);
        let hollow = build_complex(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert_eq!(betti(&hollow, 1, f2()), 1);
        assert_eq!(betti(&hollow, 0, f2()), 1);
        let two = build_complex(&[vec![0], vec![1]]).unwrap();
        assert_eq!(betti(&two, 0, f2()), 2);
        let filled = build_complex(&[vec![0, 1, 2]]).unwrap();
        assert_eq!(betti(&filled, 1, f2()), 0);
        assert_eq!(betti(&filled, 5, f2()), 0);
    }

    #[test]
    fn projective_plane_torsion_shows_in_characteristic_two() {
        // 6-vertex triangulation of RP².
        let faces = [
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 5, 1],
            [1, 2, 4],
            [2, 3, 5],
            [3, 4, 1],
            [4, 5, 2],
            [5, 1, 3],
        ];
        let k = build_complex(&faces).unwrap();
        assert_eq!(betti(&k, 1, f2()), 1);
        assert_eq!(betti(&k, 2, f2()), 1);
        let f3 = FieldSpec::new(3).unwrap();
        assert_eq!(betti(&k, 1, f3), 0);
        assert_eq!(betti(&k, 2, f3), 0);
    }

    #[test]
    fn pairs_of_two_vertex_edge() {
        let (k, f) = two_vertex_edge();
        let pairs = persistence_pairs(&k, &f, 0, f2()).unwrap();
        assert_eq!(pairs.finite, vec![(0.0, 1.0)]);
        assert_eq!(pairs.essential, vec![0.0]);
        assert!(persistence_pairs(&k, &f, 3, f2())
            .unwrap()
            .finite
            .is_empty());
        assert!(persistence_pairs(&k, &f, 3, f2())
            .unwrap()
            .essential
            .is_empty());
    }

    #[test]
    fn hollow_triangle_has_essential_loop() {
        let k = build_complex(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let f = ScalarFiltration::new(&k, vec![0.0; 6]).unwrap();
        let pairs = persistence_pairs(&k, &f, 1, f2()).unwrap();
        assert!(pairs.finite.is_empty());
        assert_eq!(pairs.essential, vec![0.0]);
    }

    #[test]
    fn zero_persistence_pairs_are_dropped() {
        let k = build_complex(&[vec![0, 1]]).unwrap();
        let f = ScalarFiltration::new(&k, vec![0.0, 1.0, 1.0]).unwrap();
        let pairs = persistence_pairs(&k, &f, 0, f2()).unwrap();
        assert!(pairs.finite.is_empty());
        assert_eq!(pairs.essential, vec![0.0]);
    }

    #[test]
    fn oracle_examples() {
        // Vertex values cannot put an edge above both endpoints, so the edge
        // entering at 1 is modeled by subdividing it with a midpoint at 1.
        let k = build_complex(&[vec![0, 2], vec![2, 1]]).unwrap();
        let phi = VectorFiltration::scalar(vec![0.0, 0.0, 1.0]).unwrap();
        assert_eq!(rank_oracle(&k, &phi, 0, &[0.5], &[1.5], f2()).unwrap(), 1);
        assert_eq!(rank_oracle(&k, &phi, 0, &[0.25], &[0.75], f2()).unwrap(), 2);

        let (k, f) = two_vertex_edge();
        let lower = f.sublevel(&k, &0.5);
        let upper = f.sublevel(&k, &1.5);
        assert_eq!(inclusion_rank(&lower, &upper, 0, f2()), 1);
        let upper = f.sublevel(&k, &0.75);
        let lower = f.sublevel(&k, &0.25);
        assert_eq!(inclusion_rank(&lower, &upper, 0, f2()), 2);
    }

    #[test]
    fn oracle_requires_strict_order() {
        let k = build_complex(&[vec![0, 1]]).unwrap();
        let phi = VectorFiltration::new(2, vec![vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
        assert!(matches!(
            rank_oracle(&k, &phi, 0, &[0.0, 0.0], &[1.0, 0.0], f2()),
            Err(Error::NotStrictlyBelow)
        ));
        assert_eq!(
            rank_oracle(&k, &phi, 0, &[5.0, 5.0], &[6.0, 6.0], f2()).unwrap(),
            betti(&k, 0, f2())
        );
    }

    #[test]
    fn custom_order_validation() {
        let (k, f) = two_vertex_edge();
        assert!(persistence_pairs_in_order(&k, &f, 0, f2(), &[1, 0, 2]).is_ok());
        assert!(persistence_pairs_in_order(&k, &f, 0, f2(), &[2, 0, 1]).is_err());
        assert!(persistence_pairs_in_order(&k, &f, 0, f2(), &[0, 0, 2]).is_err());
        assert!(persistence_pairs_in_order(&k, &f, 0, f2(), &[0, 1]).is_err());
    }
}
