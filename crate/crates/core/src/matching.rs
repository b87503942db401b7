//! Bottleneck matching distance between persistence diagrams.
//!
//! Costs follow the `d̃` pseudodistance on `Δ*`: moving one point onto
//! another under the max-norm, or moving both onto the diagonal, whichever is
//! cheaper. Cornerpoints at infinity can only be matched among themselves;
//! any other assignment costs `∞`.

use std::cmp::Ordering;

use crate::diagram::{DiagramPoint, PersistenceDiagram};
use crate::error::{Error, Result};
use crate::scalar::{Extended, ExtendedReal, Scalar};

/// Point-count cap (per diagram, with multiplicity) for [`brute_force_bottleneck`].
pub const BRUTE_FORCE_CAP: usize = 8;

pub fn diagonal_cost<T: Scalar>(p: &DiagramPoint<T>) -> ExtendedReal<T> {
    match &p.death {
        Extended::Finite(v) => Extended::Finite((v.clone() - p.birth.clone()).half()),
        Extended::Infinite => Extended::Infinite,
    }
}

/// `d̃(p, q) = min{ max{|u−u′|, |v−v′|}, max{(v−u)/2, (v′−u′)/2} }`.
pub fn dtilde<T: Scalar>(p: &DiagramPoint<T>, q: &DiagramPoint<T>) -> ExtendedReal<T> {
    let du = Extended::Finite((p.birth.clone() - q.birth.clone()).abs());
    let dv = p.death.abs_diff(&q.death);
    let direct = du.max(dv);
    let via_diagonal = diagonal_cost(p).max(diagonal_cost(q));
    direct.min(via_diagonal)
}

/// Maximum-cardinality bipartite matching.
pub trait BipartiteMatcher {
    /// `adjacency[l]` lists the right vertices adjacent to left vertex `l`.
    fn max_matching(&self, right_count: usize, adjacency: &[Vec<usize>]) -> usize;
}

/// Kuhn's augmenting-path algorithm.
#[derive(Clone, Copy, Debug, Default)]
pub struct AugmentingPaths;

impl BipartiteMatcher for AugmentingPaths {
    fn max_matching(&self, right_count: usize, adjacency: &[Vec<usize>]) -> usize {
        fn augment(
            left: usize,
            adjacency: &[Vec<usize>],
            visited: &mut [bool],
            match_of_right: &mut [Option<usize>],
        ) -> bool {
            for &r in &adjacency[left] {
                if visited[r] {
                    continue;
                }
                visited[r] = true;
                let free = match match_of_right[r] {
                    None => true,
                    Some(other) => augment(other, adjacency, visited, match_of_right),
                };
                if free {
                    match_of_right[r] = Some(left);
                    return true;
                }
            }
            false
        }

        let mut match_of_right = vec![None; right_count];
        let mut size = 0;
        for left in 0..adjacency.len() {
            let mut visited = vec![false; right_count];
            if augment(left, adjacency, &mut visited, &mut match_of_right) {
                size += 1;
            }
        }
        size
    }
}

/// Bottleneck cost of matching two equal-size sets of essential births:
/// on the line, sorted order is optimal.
fn essential_cost<T: Scalar>(a: &[T], b: &[T]) -> ExtendedReal<T> {
    if a.len() != b.len() {
        return Extended::Infinite;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.total_cmp(y));
    b.sort_by(|x, y| x.total_cmp(y));
    let cost = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x.clone() - y.clone()).abs())
        .fold(T::zero(), |acc, c| T::max_of(&acc, &c));
    Extended::Finite(cost)
}

/// Bottleneck distance between two diagrams.
pub fn d_match<T: Scalar>(
    d1: &PersistenceDiagram<T>,
    d2: &PersistenceDiagram<T>,
) -> ExtendedReal<T> {
    d_match_with(&AugmentingPaths, d1, d2)
}

/// [`d_match`] with a caller-chosen feasibility matcher.
pub fn d_match_with<T: Scalar, M: BipartiteMatcher>(
    matcher: &M,
    d1: &PersistenceDiagram<T>,
    d2: &PersistenceDiagram<T>,
) -> ExtendedReal<T> {
    let essential = essential_cost(&d1.expanded_infinite(), &d2.expanded_infinite());
    let Extended::Finite(essential) = essential else {
        return Extended::Infinite;
    };
    let a = proper_points(d1);
    let b = proper_points(d2);
    let proper = proper_bottleneck(matcher, &a, &b);
    Extended::Finite(T::max_of(&essential, &proper))
}

fn proper_points<T: Scalar>(d: &PersistenceDiagram<T>) -> Vec<DiagramPoint<T>> {
    d.expanded_proper()
        .into_iter()
        .map(|(u, v)| DiagramPoint {
            birth: u,
            death: Extended::Finite(v),
        })
        .collect()
}

fn finite_of<T: Scalar>(e: ExtendedReal<T>) -> T {
    match e {
        Extended::Finite(v) => v,
        Extended::Infinite => unreachable!("proper points have finite costs"),
    }
}

fn proper_bottleneck<T: Scalar, M: BipartiteMatcher>(
    matcher: &M,
    a: &[DiagramPoint<T>],
    b: &[DiagramPoint<T>],
) -> T {
    let (n, m) = (a.len(), b.len());
    if n == 0 && m == 0 {
        return T::zero();
    }
    let cross: Vec<Vec<T>> = a
        .iter()
        .map(|p| b.iter().map(|q| finite_of(dtilde(p, q))).collect())
        .collect();
    let diag_a: Vec<T> = a.iter().map(|p| finite_of(diagonal_cost(p))).collect();
    let diag_b: Vec<T> = b.iter().map(|q| finite_of(diagonal_cost(q))).collect();

    let mut candidates: Vec<T> = cross
        .iter()
        .flatten()
        .chain(&diag_a)
        .chain(&diag_b)
        .cloned()
        .collect();
    candidates.sort_by(|x, y| x.total_cmp(y));
    candidates.dedup();

    // Left: a_0..a_{n-1}, then diagonal copies of b. Right: b_0..b_{m-1},
    // then diagonal copies of a.
    let feasible = |delta: &T| {
        let mut adjacency: Vec<Vec<usize>> = Vec::with_capacity(n + m);
        for i in 0..n {
            let mut row: Vec<usize> = (0..m).filter(|&j| cross[i][j] <= *delta).collect();
            if diag_a[i] <= *delta {
                row.push(m + i);
            }
            adjacency.push(row);
        }
        for j in 0..m {
            let mut row = Vec::with_capacity(n + 1);
            if diag_b[j] <= *delta {
                row.push(j);
            }
            row.extend(m..m + n);
            adjacency.push(row);
        }
        matcher.max_matching(n + m, &adjacency) == n + m
    };

    // Smallest feasible candidate; the largest one is always feasible.
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(&candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo].clone()
}

/// Exhaustive bottleneck distance for small diagrams.
pub fn brute_force_bottleneck<T: Scalar>(
    d1: &PersistenceDiagram<T>,
    d2: &PersistenceDiagram<T>,
) -> Result<ExtendedReal<T>> {
    for d in [d1, d2] {
        let points = d.proper_count() + d.infinite_count();
        if points > BRUTE_FORCE_CAP {
            return Err(Error::TooManyPoints {
                points,
                cap: BRUTE_FORCE_CAP,
            });
        }
    }
    let ess_a = d1.expanded_infinite();
    let ess_b = d2.expanded_infinite();
    if ess_a.len() != ess_b.len() {
        return Ok(Extended::Infinite);
    }
    let mut best_essential: Option<T> = None;
    for_each_permutation(ess_b.len(), &mut |perm| {
        let cost = ess_a
            .iter()
            .zip(perm)
            .map(|(x, &j)| (x.clone() - ess_b[j].clone()).abs())
            .fold(T::zero(), |acc, c| T::max_of(&acc, &c));
        if best_essential.as_ref().is_none_or(|b| cost < *b) {
            best_essential = Some(cost);
        }
    });
    let essential = best_essential.unwrap_or_else(T::zero);

    let a = proper_points(d1);
    let b = proper_points(d2);
    let mut used = vec![false; b.len()];
    let mut best: Option<T> = None;
    enumerate_partial(&a, &b, 0, &mut used, T::zero(), &mut best);
    let proper = best.unwrap_or_else(T::zero);
    Ok(Extended::Finite(T::max_of(&essential, &proper)))
}

fn enumerate_partial<T: Scalar>(
    a: &[DiagramPoint<T>],
    b: &[DiagramPoint<T>],
    i: usize,
    used: &mut [bool],
    cost: T,
    best: &mut Option<T>,
) {
    if i == a.len() {
        let total = b
            .iter()
            .zip(used.iter())
            .filter(|(_, u)| !**u)
            .map(|(q, _)| finite_of(diagonal_cost(q)))
            .fold(cost, |acc, c| T::max_of(&acc, &c));
        if best
            .as_ref()
            .is_none_or(|b| total.total_cmp(b) == Ordering::Less)
        {
            *best = Some(total);
        }
        return;
    }
    let to_diagonal = T::max_of(&cost, &finite_of(diagonal_cost(&a[i])));
    enumerate_partial(a, b, i + 1, used, to_diagonal, best);
    for j in 0..b.len() {
        if used[j] {
            continue;
        }
        used[j] = true;
        let with_j = T::max_of(&cost, &finite_of(dtilde(&a[i], &b[j])));
        enumerate_partial(a, b, i + 1, used, with_j, best);
        used[j] = false;
    }
}

fn for_each_permutation(n: usize, visit: &mut impl FnMut(&[usize])) {
    fn heap(k: usize, perm: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        if k <= 1 {
            visit(perm);
            return;
        }
        for i in 0..k {
            heap(k - 1, perm, visit);
            let swap = if k.is_multiple_of(2) { i } else { 0 };
            perm.swap(swap, k - 1);
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    heap(n, &mut perm, visit);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(u: f64, v: f64) -> DiagramPoint<f64> {
        DiagramPoint::proper(u, v).unwrap()
    }

    fn inf(u: f64) -> DiagramPoint<f64> {
        DiagramPoint::at_infinity(u)
    }

    fn diagram(points: &[(DiagramPoint<f64>, usize)]) -> PersistenceDiagram<f64> {
        PersistenceDiagram::from_points(0, points.iter().cloned()).unwrap()
    }

    #[test]
    fn dtilde_examples() {
        assert_eq!(dtilde(&p(0.0, 2.0), &p(0.0, 2.0)), Extended::Finite(0.0));
        assert_eq!(dtilde(&p(0.0, 2.0), &p(1.0, 2.0)), Extended::Finite(1.0));
        assert_eq!(dtilde(&inf(0.0), &inf(3.0)), Extended::Finite(3.0));
        assert_eq!(dtilde(&inf(0.0), &p(1.0, 2.0)), Extended::Infinite);
        assert_eq!(dtilde(&p(1.0, 2.0), &inf(0.0)), Extended::Infinite);
    }

    #[test]
    fn diagonal_cost_examples() {
        assert_eq!(diagonal_cost(&p(0.0, 2.0)), Extended::Finite(1.0));
        let tiny = diagonal_cost(&p(3.0, 3.0 + 1e-9)).to_f64();
        assert!((tiny - 5e-10).abs() < 1e-15);
        assert_eq!(diagonal_cost(&inf(0.0)), Extended::Infinite);
    }

    #[test]
    fn d_match_examples() {
        let d = diagram(&[(inf(0.0), 1), (p(0.0, 4.0), 1)]);
        assert_eq!(d_match(&d, &d), Extended::Finite(0.0));
        let a = diagram(&[(inf(0.0), 1)]);
        let b = diagram(&[(inf(1.0), 1)]);
        assert_eq!(d_match(&a, &b), Extended::Finite(1.0));
        assert_eq!(d_match(&d, &b), Extended::Finite(2.0));
        let two = diagram(&[(inf(0.0), 2)]);
        assert_eq!(d_match(&a, &two), Extended::Infinite);
    }

    #[test]
    fn brute_force_examples() {
        let empty = diagram(&[]);
        assert_eq!(
            brute_force_bottleneck(&empty, &empty).unwrap(),
            Extended::Finite(0.0)
        );
        let single = diagram(&[(p(0.0, 4.0), 1)]);
        assert_eq!(
            brute_force_bottleneck(&single, &empty).unwrap(),
            Extended::Finite(2.0)
        );
        let a = diagram(&[(p(0.0, 2.0), 1), (p(5.0, 6.0), 1)]);
        let b = diagram(&[(p(0.5, 2.0), 1)]);
        assert_eq!(
            brute_force_bottleneck(&a, &b).unwrap(),
            Extended::Finite(0.5)
        );
        assert_eq!(d_match(&a, &b), Extended::Finite(0.5));
    }

    #[test]
    fn brute_force_cap() {
        let big = diagram(&[(p(0.0, 1.0), 9)]);
        assert!(matches!(
            brute_force_bottleneck(&big, &big),
            Err(Error::TooManyPoints { points: 9, .. })
        ));
    }

    #[test]
    fn matcher_counts() {
        let adjacency = vec![vec![0, 1], vec![0], vec![1]];
        assert_eq!(AugmentingPaths.max_matching(2, &adjacency), 2);
        assert_eq!(
            AugmentingPaths.max_matching(3, &[vec![0], vec![1], vec![2]]),
            3
        );
    }

    #[test]
    fn permutations_are_complete() {
        let mut seen = Vec::new();
        for_each_permutation(4, &mut |p| seen.push(p.to_vec()));
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 24);
        let mut count = 0;
        for_each_permutation(0, &mut |_| count += 1);
        assert_eq!(count, 1);
    }
}
