//! Persistence diagrams and the cornerpoint multiplicities that define them.
//!
//! A diagram stores proper cornerpoints `(u, v)` with `u < v` and
//! cornerpoints at infinity `(u, ∞)`, each with a positive multiplicity. The
//! diagonal is never materialized.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::homology::PersistencePairs;
use crate::scalar::{Extended, Scalar};

/// A point of `Δ* = Δ⁺ ∪ {(u, ∞)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagramPoint<T> {
    pub birth: T,
    pub death: Extended<T>,
}

impl<T: Scalar> DiagramPoint<T> {
    pub fn new(birth: T, death: Extended<T>) -> Result<Self> {
        if let Extended::Finite(d) = &death {
            if birth >= *d {
                return Err(Error::Malformed(format!(
                    "point ({birth}, {d}) is not above the diagonal"
                )));
            }
        }
        Ok(DiagramPoint { birth, death })
    }

    pub fn proper(birth: T, death: T) -> Result<Self> {
        Self::new(birth, Extended::Finite(death))
    }

    pub fn at_infinity(birth: T) -> Self {
        DiagramPoint {
            birth,
            death: Extended::Infinite,
        }
    }

    pub fn is_at_infinity(&self) -> bool {
        self.death.is_infinite()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PersistenceDiagram<T> {
    degree: usize,
    /// Sorted by `(birth, death)`, distinct points.
    proper: Vec<(T, T, usize)>,
    /// Sorted by birth, distinct points.
    infinite: Vec<(T, usize)>,
}

impl<T: Scalar> PersistenceDiagram<T> {
    pub fn empty(degree: usize) -> Self {
        PersistenceDiagram {
            degree,
            proper: Vec::new(),
            infinite: Vec::new(),
        }
    }

    /// Builds a diagram from `(point, multiplicity)` entries; repeated points
    /// are merged and zero multiplicities skipped.
    pub fn from_points(
        degree: usize,
        points: impl IntoIterator<Item = (DiagramPoint<T>, usize)>,
    ) -> Result<Self> {
        let mut proper = Vec::new();
        let mut infinite = Vec::new();
        for (point, mult) in points {
            let point = DiagramPoint::new(point.birth, point.death)?;
            if mult == 0 {
                continue;
            }
            match point.death {
                Extended::Finite(d) => proper.push((point.birth, d, mult)),
                Extended::Infinite => infinite.push((point.birth, mult)),
            }
        }
        Ok(Self::canonical(degree, proper, infinite))
    }

    fn canonical(
        degree: usize,
        mut proper: Vec<(T, T, usize)>,
        mut infinite: Vec<(T, usize)>,
    ) -> Self {
        proper.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.total_cmp(&b.1)));
        let mut merged: Vec<(T, T, usize)> = Vec::with_capacity(proper.len());
        for (u, v, m) in proper {
            match merged.last_mut() {
                Some(last) if last.0 == u && last.1 == v => last.2 += m,
                _ => merged.push((u, v, m)),
            }
        }
        infinite.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged_inf: Vec<(T, usize)> = Vec::with_capacity(infinite.len());
        for (u, m) in infinite {
            match merged_inf.last_mut() {
                Some(last) if last.0 == u => last.1 += m,
                _ => merged_inf.push((u, m)),
            }
        }
        PersistenceDiagram {
            degree,
            proper: merged,
            infinite: merged_inf,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn proper(&self) -> &[(T, T, usize)] {
        &self.proper
    }

    pub fn at_infinity(&self) -> &[(T, usize)] {
        &self.infinite
    }

    pub fn is_empty(&self) -> bool {
        self.proper.is_empty() && self.infinite.is_empty()
    }

    /// Total number of proper cornerpoints counted with multiplicity.
    pub fn proper_count(&self) -> usize {
        self.proper.iter().map(|p| p.2).sum()
    }

    pub fn infinite_count(&self) -> usize {
        self.infinite.iter().map(|p| p.1).sum()
    }

    /// Every distinct point with its multiplicity, proper points first.
    pub fn points(&self) -> impl Iterator<Item = (DiagramPoint<T>, usize)> + '_ {
        let proper = self.proper.iter().map(|(u, v, m)| {
            (
                DiagramPoint {
                    birth: u.clone(),
                    death: Extended::Finite(v.clone()),
                },
                *m,
            )
        });
        let infinite = self
            .infinite
            .iter()
            .map(|(u, m)| (DiagramPoint::at_infinity(u.clone()), *m));
        proper.chain(infinite)
    }

    /// Proper points repeated according to multiplicity.
    pub fn expanded_proper(&self) -> Vec<(T, T)> {
        self.proper
            .iter()
            .flat_map(|(u, v, m)| std::iter::repeat_n((u.clone(), v.clone()), *m))
            .collect()
    }

    /// Births of cornerpoints at infinity repeated according to multiplicity.
    pub fn expanded_infinite(&self) -> Vec<T> {
        self.infinite
            .iter()
            .flat_map(|(u, m)| std::iter::repeat_n(u.clone(), *m))
            .collect()
    }

    /// Multiplicity stored for `point` (0 when absent).
    pub fn multiplicity_of(&self, point: &DiagramPoint<T>) -> usize {
        match &point.death {
            Extended::Finite(v) => self
                .proper
                .iter()
                .find(|(a, b, _)| *a == point.birth && b == v)
                .map_or(0, |p| p.2),
            Extended::Infinite => self
                .infinite
                .iter()
                .find(|(a, _)| *a == point.birth)
                .map_or(0, |p| p.1),
        }
    }

    /// Applies a strictly increasing map to both coordinates (`f(∞) = ∞`).
    pub fn map_increasing(&self, mut f: impl FnMut(&T) -> T) -> Self {
        let proper = self
            .proper
            .iter()
            .map(|(u, v, m)| (f(u), f(v), *m))
            .collect();
        let infinite = self.infinite.iter().map(|(u, m)| (f(u), *m)).collect();
        Self::canonical(self.degree, proper, infinite)
    }

    /// Multiset equality with coordinates compared up to `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let close = |a: &T, b: &T| (a.to_f64() - b.to_f64()).abs() <= tol;
        self.degree == other.degree
            && self.proper.len() == other.proper.len()
            && self.infinite.len() == other.infinite.len()
            && self
                .proper
                .iter()
                .zip(&other.proper)
                .all(|(a, b)| close(&a.0, &b.0) && close(&a.1, &b.1) && a.2 == b.2)
            && self
                .infinite
                .iter()
                .zip(&other.infinite)
                .all(|(a, b)| close(&a.0, &b.0) && a.1 == b.1)
    }

    /// Coordinates of all points, sorted and deduplicated.
    pub fn coordinates(&self) -> Vec<T> {
        let mut values: Vec<T> = self
            .proper
            .iter()
            .flat_map(|(u, v, _)| [u.clone(), v.clone()])
            .chain(self.infinite.iter().map(|(u, _)| u.clone()))
            .collect();
        values.sort_by(|a, b| a.total_cmp(b));
        values.dedup();
        values
    }
}

/// Finite pairs become proper cornerpoints; essential births become
/// cornerpoints at infinity.
pub fn diagram_from_pairs<T: Scalar>(pairs: &PersistencePairs<T>) -> PersistenceDiagram<T> {
    let proper = pairs
        .finite
        .iter()
        .filter(|(b, d)| b < d)
        .map(|(b, d)| (b.clone(), d.clone(), 1))
        .collect();
    let infinite = pairs.essential.iter().map(|b| (b.clone(), 1)).collect();
    PersistenceDiagram::canonical(pairs.degree, proper, infinite)
}

/// `μ(p)` of a proper point from four rank evaluations.
pub fn multiplicity_proper<T: Scalar>(
    rank: impl Fn(&T, &T) -> usize,
    birth: &T,
    death: &T,
    epsilon: &T,
) -> Result<usize> {
    if *epsilon <= T::zero() {
        return Err(Error::InvalidEpsilon(format!("{epsilon} is not positive")));
    }
    let (u_lo, u_hi) = (
        birth.clone() - epsilon.clone(),
        birth.clone() + epsilon.clone(),
    );
    let (v_lo, v_hi) = (
        death.clone() - epsilon.clone(),
        death.clone() + epsilon.clone(),
    );
    if u_hi >= v_lo {
        return Err(Error::InvalidEpsilon(format!(
            "{epsilon} too large for ({birth}, {death})"
        )));
    }
    let value = rank(&u_hi, &v_lo) as i64 - rank(&u_lo, &v_lo) as i64 - rank(&u_hi, &v_hi) as i64
        + rank(&u_lo, &v_hi) as i64;
    usize::try_from(value).map_err(|_| Error::NegativeMultiplicity(format!("({birth}, {death})")))
}

/// `μ(r)` of the vertical line `u = ū` from two rank evaluations.
pub fn multiplicity_infinity<T: Scalar>(
    rank: impl Fn(&T, &T) -> usize,
    birth: &T,
    epsilon: &T,
) -> Result<usize> {
    if *epsilon <= T::zero() {
        return Err(Error::InvalidEpsilon(format!("{epsilon} is not positive")));
    }
    let far = T::one() / epsilon.clone();
    let u_hi = birth.clone() + epsilon.clone();
    if u_hi >= far {
        return Err(Error::InvalidEpsilon(format!(
            "{epsilon} too large for ({birth}, ∞)"
        )));
    }
    let u_lo = birth.clone() - epsilon.clone();
    let value = rank(&u_hi, &far) as i64 - rank(&u_lo, &far) as i64;
    usize::try_from(value).map_err(|_| Error::NegativeMultiplicity(format!("({birth}, ∞)")))
}

/// A quarter of the smallest gap between distinct critical values, shrunk if
/// needed so that `1/ε` exceeds every critical value by a margin.
pub fn default_epsilon<T: Scalar>(critical_values: &[T]) -> T {
    let mut sorted = critical_values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    sorted.dedup();
    let four = T::from_i64(4);
    let mut eps = sorted
        .windows(2)
        .map(|w| w[1].clone() - w[0].clone())
        .min_by(|a, b| a.total_cmp(b))
        .map_or_else(|| T::one() / four.clone(), |gap| gap / four.clone());
    let reach = sorted
        .iter()
        .map(Scalar::abs)
        .max_by(|a, b| a.total_cmp(b))
        .unwrap_or_else(T::zero);
    // 1/ε must exceed every critical value plus ε.
    let cap = T::one() / (T::from_i64(2) * (reach + T::one()));
    if cap.total_cmp(&eps) == Ordering::Less {
        eps = cap;
    }
    eps
}

/// Number of points `(u, v)` with `u ≤ ū` and `v > v̄`, counted with
/// multiplicity.
pub fn rank_from_diagram<T: Scalar>(
    diagram: &PersistenceDiagram<T>,
    u_bar: &T,
    v_bar: &T,
) -> usize {
    let proper: usize = diagram
        .proper
        .iter()
        .filter(|(u, v, _)| u <= u_bar && v > v_bar)
        .map(|p| p.2)
        .sum();
    let infinite: usize = diagram
        .infinite
        .iter()
        .filter(|(u, _)| u <= u_bar)
        .map(|p| p.1)
        .sum();
    proper + infinite
}
