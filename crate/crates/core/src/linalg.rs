//! Dense column reduction over prime fields.
//!
//! Characteristic 2 uses bit-packed columns; other primes use one `u32` per
//! entry. Both share the same reduction routine through [`Column`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient field `𝔽_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    characteristic: u32,
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec { characteristic: 2 }
    }
}

impl FieldSpec {
    pub fn new(characteristic: u64) -> Result<Self> {
        if !is_prime(characteristic) || characteristic > u32::MAX as u64 {
            return Err(Error::NotPrime(characteristic));
        }
        Ok(FieldSpec {
            characteristic: characteristic as u32,
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) trait Column: Clone + Send {
    fn zeros(len: usize) -> Self;
    /// Adds `value` (an integer, reduced mod p) at `row`.
    fn add_entry(&mut self, row: usize, value: i64, p: u32);
    fn coeff(&self, row: usize) -> u32;
    /// Largest row index with a nonzero entry.
    fn low(&self) -> Option<usize>;
    /// `self += c · other`.
    fn axpy(&mut self, c: u32, other: &Self, p: u32);
    fn is_zero(&self) -> bool {
        self.low().is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitColumn(Vec<u64>);

impl Column for BitColumn {
    fn zeros(len: usize) -> Self {
        BitColumn(vec![0; len.div_ceil(64)])
    }

    fn add_entry(&mut self, row: usize, value: i64, _p: u32) {
        if value.rem_euclid(2) == 1 {
            self.0[row / 64] ^= 1 << (row % 64);
        }
    }

    fn coeff(&self, row: usize) -> u32 {
        ((self.0[row / 64] >> (row % 64)) & 1) as u32
    }

    fn low(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .rev()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    fn axpy(&mut self, c: u32, other: &Self, _p: u32) {
        if c % 2 == 1 {
            for (a, b) in self.0.iter_mut().zip(&other.0) {
                *a ^= *b;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct PrimeColumn(Vec<u32>);

impl Column for PrimeColumn {
    fn zeros(len: usize) -> Self {
        PrimeColumn(vec![0; len])
    }

    fn add_entry(&mut self, row: usize, value: i64, p: u32) {
        let v = value.rem_euclid(p as i64) as u64;
        self.0[row] = ((self.0[row] as u64 + v) % p as u64) as u32;
    }

    fn coeff(&self, row: usize) -> u32 {
        self.0[row]
    }

    fn low(&self) -> Option<usize> {
        self.0.iter().rposition(|&x| x != 0)
    }

    fn axpy(&mut self, c: u32, other: &Self, p: u32) {
        if c == 0 {
            return;
        }
        let (c, p) = (c as u64, p as u64);
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            if *b != 0 {
                *a = ((*a as u64 + c * *b as u64) % p) as u32;
            }
        }
    }
}

fn inverse_mod(a: u32, p: u32) -> u32 {
    // Fermat: a^(p-2)
    let (mut base, mut exp, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

/// A sparse description of a matrix column: `(row, integer coefficient)`.
pub(crate) type SparseColumn = Vec<(usize, i64)>;

/// Result of the standard left-to-right column reduction `R = D·V`.
pub(crate) struct Reduction<C> {
    pub reduced: Vec<C>,
    /// Present when requested; `V` columns span the kernel where `R` is zero.
    pub transform: Option<Vec<C>>,
}

impl<C: Column> Reduction<C> {
    pub fn rank(&self) -> usize {
        self.reduced.iter().filter(|c| !c.is_zero()).count()
    }

    /// `(low row, column)` for every nonzero reduced column.
    pub fn pivots(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.reduced
            .iter()
            .enumerate()
            .filter_map(|(j, c)| c.low().map(|l| (l, j)))
    }
}

pub(crate) fn reduce<C: Column>(
    rows: usize,
    columns: &[SparseColumn],
    p: u32,
    track_transform: bool,
) -> Reduction<C> {
    let mut reduced: Vec<C> = columns
        .iter()
        .map(|entries| {
            let mut c = C::zeros(rows);
            for &(row, value) in entries {
                c.add_entry(row, value, p);
            }
            c
        })
        .collect();
    let mut transform: Option<Vec<C>> = track_transform.then(|| {
        (0..columns.len())
            .map(|j| {
                let mut c = C::zeros(columns.len());
                c.add_entry(j, 1, p);
                c
            })
            .collect()
    });
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; rows];
    for j in 0..reduced.len() {
        while let Some(low) = reduced[j].low() {
            let Some(i) = pivot_of_row[low] else {
                pivot_of_row[low] = Some(j);
                break;
            };
            let factor = {
                let target = reduced[j].coeff(low) as u64;
                let pivot = reduced[i].coeff(low);
                (target * inverse_mod(pivot, p) as u64 % p as u64) as u32
            };
            let negated = (p - factor) % p;
            let (head, tail) = reduced.split_at_mut(j);
            tail[0].axpy(negated, &head[i], p);
            if let Some(v) = transform.as_mut() {
                let (head, tail) = v.split_at_mut(j);
                tail[0].axpy(negated, &head[i], p);
            }
        }
    }
    Reduction { reduced, transform }
}

/// Rank of the matrix with the given columns.
pub(crate) fn rank(rows: usize, columns: &[SparseColumn], field: FieldSpec) -> usize {
    match field.characteristic() {
        2 => reduce::<BitColumn>(rows, columns, 2, false).rank(),
        p => reduce::<PrimeColumn>(rows, columns, p, false).rank(),
    }
}

/// Basis of the kernel, as sparse coefficient vectors over the column index
/// space (coefficients in `0..p`).
pub(crate) fn kernel_basis(
    rows: usize,
    columns: &[SparseColumn],
    field: FieldSpec,
) -> Vec<SparseColumn> {
    fn run<C: Column>(rows: usize, columns: &[SparseColumn], p: u32) -> Vec<SparseColumn> {
        let red = reduce::<C>(rows, columns, p, true);
        let v = red.transform.as_ref().expect("transform tracked");
        red.reduced
            .iter()
            .zip(v)
            .filter(|(r, _)| r.is_zero())
            .map(|(_, vcol)| {
                (0..columns.len())
                    .filter_map(|i| {
                        let c = vcol.coeff(i);
                        (c != 0).then_some((i, c as i64))
                    })
                    .collect()
            })
            .collect()
    }
    match field.characteristic() {
        2 => run::<BitColumn>(rows, columns, 2),
        p => run::<PrimeColumn>(rows, columns, p),
    }
}

/// `(low row, column)` pivot pairs of the reduced matrix.
pub(crate) fn pivot_pairs(
    rows: usize,
    columns: &[SparseColumn],
    field: FieldSpec,
) -> Vec<(usize, usize)> {
    match field.characteristic() {
        2 => reduce::<BitColumn>(rows, columns, 2, false)
            .pivots()
            .collect(),
        p => reduce::<PrimeColumn>(rows, columns, p, false)
            .pivots()
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(FieldSpec::new(2).is_ok());
        assert!(FieldSpec::new(3).is_ok());
        assert!(FieldSpec::new(97).is_ok());
        assert!(matches!(FieldSpec::new(1), Err(Error::NotPrime(1))));
        assert!(FieldSpec::new(9).is_err());
        assert!(FieldSpec::new(0).is_err());
    }

    #[test]
    fn bit_column_low_across_words() {
        let mut c = BitColumn::zeros(130);
        c.add_entry(3, 1, 2);
        c.add_entry(129, 1, 2);
        assert_eq!(c.low(), Some(129));
        c.add_entry(129, 1, 2);
        assert_eq!(c.low(), Some(3));
    }

    #[test]
    fn inverses() {
        for p in [3u32, 5, 7, 101] {
            for a in 1..p {
                assert_eq!(a as u64 * inverse_mod(a, p) as u64 % p as u64, 1);
            }
        }
    }

    #[test]
    fn rank_depends_on_characteristic() {
        // [[1,1],[1,-1]] has rank 1 over F2 and rank 2 over F3.
        let cols = vec![vec![(0, 1), (1, 1)], vec![(0, 1), (1, -1)]];
        assert_eq!(rank(2, &cols, FieldSpec::new(2).unwrap()), 1);
        assert_eq!(rank(2, &cols, FieldSpec::new(3).unwrap()), 2);
    }

    #[test]
    fn kernel_of_hollow_triangle_boundary() {
        // edges 01, 02, 12 over vertices 0,1,2 with signs
        let cols = vec![
            vec![(0, -1), (1, 1)],
            vec![(0, -1), (2, 1)],
            vec![(1, -1), (2, 1)],
        ];
        for p in [2, 3, 5] {
            let field = FieldSpec::new(p).unwrap();
            let ker = kernel_basis(3, &cols, field);
            assert_eq!(ker.len(), 1);
            assert_eq!(rank(3, &cols, field), 2);
        }
    }
}
