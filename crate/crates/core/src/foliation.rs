//! Half-plane foliation of `Δ⁺ ⊂ ℝⁿ × ℝⁿ`.
//!
//! Each leaf is `{(sλ + β, tλ + β) : s < t}` for a direction `λ` with
//! positive entries and an offset `β` with `Σβᵢ = 0`. A [`Scheme`] fixes how
//! `λ` is normalized, which selects one representative pair per leaf.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{ScalarFiltration, SimplicialComplex, VectorFiltration};
use crate::error::{Error, Result};
use crate::scalar::{strictly_below, Scalar};

/// Tolerance for float-mode normalization checks.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

/// Normalization of the direction vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    /// `Σλᵢ² = 1`.
    UnitNorm,
    /// `Σλᵢ = 1`.
    SumOne,
    /// `Σλᵢᵖ = 1`.
    PNorm(u32),
}

impl Scheme {
    pub fn exponent(&self) -> u32 {
        match self {
            Scheme::UnitNorm => 2,
            Scheme::SumOne => 1,
            Scheme::PNorm(p) => *p,
        }
    }

    /// `(Σ|xᵢ|ᵖ)^{1/p}` for this scheme's exponent.
    pub fn norm<T: Scalar>(&self, x: &[T]) -> Result<T> {
        let p = self.exponent();
        let sum = x.iter().fold(T::zero(), |acc, v| acc + v.abs().powi(p));
        sum.nth_root(p)
            .ok_or_else(|| Error::RequiresFloat(self.to_string()))
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::UnitNorm => f.write_str("adm"),
            Scheme::SumOne => f.write_str("ladm"),
            Scheme::PNorm(p) => write!(f, "pnorm:{p}"),
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "adm" | "unit" => Ok(Scheme::UnitNorm),
            "ladm" | "sum" => Ok(Scheme::SumOne),
            other => {
                let p = other
                    .strip_prefix("pnorm:")
                    .and_then(|p| p.parse::<u32>().ok())
                    .filter(|p| *p >= 1)
                    .ok_or_else(|| Error::Malformed(format!("unknown scheme {other:?}")))?;
                Ok(Scheme::PNorm(p))
            }
        }
    }
}

fn close<T: Scalar>(a: &T, b: &T, scale: f64) -> bool {
    if T::EXACT {
        a == b
    } else {
        (a.to_f64() - b.to_f64()).abs() <= FLOAT_TOLERANCE * scale.max(1.0)
    }
}

fn magnitude<T: Scalar>(values: &[T]) -> f64 {
    values.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
}

fn sum<T: Scalar>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |acc, v| acc + v.clone())
}

/// A direction/offset pair selecting one leaf.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissiblePair<T> {
    pub lambda: Vec<T>,
    pub beta: Vec<T>,
    pub scheme: Scheme,
}

impl<T: Scalar> AdmissiblePair<T> {
    /// Checks positivity, `Σβᵢ = 0` and the scheme's normalization (exactly in
    /// rational mode, within [`FLOAT_TOLERANCE`] otherwise).
    pub fn new(scheme: Scheme, lambda: Vec<T>, beta: Vec<T>) -> Result<Self> {
        if lambda.is_empty() || lambda.len() != beta.len() {
            return Err(Error::NotAdmissible(
                "λ and β must have the same nonzero length".into(),
            ));
        }
        if let Some(bad) = lambda.iter().find(|l| **l <= T::zero()) {
            return Err(Error::NotAdmissible(format!(
                "λ has a nonpositive entry {bad}"
            )));
        }
        let beta_sum = sum(&beta);
        if !close(
            &beta_sum,
            &T::zero(),
            1.0 + magnitude(&beta) * beta.len() as f64,
        ) {
            return Err(Error::NotAdmissible(format!("Σβ = {beta_sum} ≠ 0")));
        }
        let p = scheme.exponent();
        let power_sum = lambda.iter().fold(T::zero(), |acc, l| acc + l.powi(p));
        if !close(&power_sum, &T::one(), lambda.len() as f64) {
            return Err(Error::NotAdmissible(format!("Σλᵢ^{p} = {power_sum} ≠ 1")));
        }
        Ok(AdmissiblePair {
            lambda,
            beta,
            scheme,
        })
    }

    pub fn components(&self) -> usize {
        self.lambda.len()
    }

    /// `sλ + β`.
    pub fn point(&self, s: &T) -> Vec<T> {
        self.lambda
            .iter()
            .zip(&self.beta)
            .map(|(l, b)| s.clone() * l.clone() + b.clone())
            .collect()
    }

    pub fn min_lambda(&self) -> T {
        self.lambda[1..]
            .iter()
            .fold(self.lambda[0].clone(), |acc, l| T::min_of(&acc, l))
    }

    /// Entrywise closeness to `other` (exact in rational mode).
    pub fn approx_eq(&self, other: &Self) -> bool {
        let scale = 1.0 + magnitude(&self.beta).max(magnitude(&other.beta));
        self.lambda.len() == other.lambda.len()
            && self
                .lambda
                .iter()
                .zip(&other.lambda)
                .all(|(a, b)| close(a, b, 1.0))
            && self
                .beta
                .iter()
                .zip(&other.beta)
                .all(|(a, b)| close(a, b, scale))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "scheme": self.scheme.to_string(),
            "lambda": self.lambda.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "beta": self.beta.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Position `(s, t)` of a point of `Δ⁺` inside its leaf.
#[derive(Clone, Debug, PartialEq)]
pub struct LeafCoordinates<T> {
    pub s: T,
    pub t: T,
}

/// The unique pair of `scheme` whose leaf contains `(u, v)`, with the leaf
/// coordinates of that point.
pub fn leaf_through<T: Scalar>(
    scheme: Scheme,
    u: &[T],
    v: &[T],
) -> Result<(AdmissiblePair<T>, LeafCoordinates<T>)> {
    if u.is_empty() || !strictly_below(u, v) {
        return Err(Error::NotStrictlyBelow);
    }
    let direction: Vec<T> = u
        .iter()
        .zip(v)
        .map(|(a, b)| b.clone() - a.clone())
        .collect();
    let norm = scheme.norm(&direction)?;
    let lambda: Vec<T> = direction.iter().map(|d| d.clone() / norm.clone()).collect();
    let lambda_sum = sum(&lambda);
    let s = sum(u) / lambda_sum.clone();
    let t = s.clone() + sum(&direction) / lambda_sum;
    let beta: Vec<T> = u
        .iter()
        .zip(&lambda)
        .map(|(ui, li)| ui.clone() - s.clone() * li.clone())
        .collect();
    let pair = AdmissiblePair::new(scheme, lambda, beta)?;
    Ok((pair, LeafCoordinates { s, t }))
}

/// Per-vertex values `maxᵢ (φᵢ(x) − βᵢ)/λᵢ` for any positive `λ`.
pub fn reduce_vertex_values<T: Scalar>(
    filtration: &VectorFiltration<T>,
    lambda: &[T],
    beta: &[T],
) -> Result<Vec<T>> {
    if lambda.len() != filtration.components() || beta.len() != filtration.components() {
        return Err(Error::ComponentMismatch {
            left: filtration.components(),
            right: lambda.len(),
        });
    }
    if lambda.iter().any(|l| *l <= T::zero()) {
        return Err(Error::NotAdmissible("λ must be positive".into()));
    }
    Ok(filtration
        .values()
        .iter()
        .map(|row| {
            row.iter()
                .zip(lambda.iter().zip(beta))
                .map(|(x, (l, b))| (x.clone() - b.clone()) / l.clone())
                .reduce(|a, b| T::max_of(&a, &b))
                .expect("at least one component")
        })
        .collect())
}

/// The scalar filtration `F_(λ,β)` on `complex`, with arbitrary positive `λ`.
pub fn reduce_with<T: Scalar>(
    complex: &SimplicialComplex,
    filtration: &VectorFiltration<T>,
    lambda: &[T],
    beta: &[T],
) -> Result<ScalarFiltration<T>> {
    let values = reduce_vertex_values(filtration, lambda, beta)?;
    ScalarFiltration::from_vertex_values(complex, &values)
}

/// The scalar filtration `F_(λ,β)` whose 1-parameter rank invariant is the
/// restriction of the multidimensional one to the leaf of `pair`.
pub fn reduce_function<T: Scalar>(
    complex: &SimplicialComplex,
    filtration: &VectorFiltration<T>,
    pair: &AdmissiblePair<T>,
) -> Result<ScalarFiltration<T>> {
    reduce_with(complex, filtration, &pair.lambda, &pair.beta)
}

/// `(λ/‖λ‖₂, β)`.
pub fn unit_normalize<T: Scalar>(pair: &AdmissiblePair<T>) -> Result<AdmissiblePair<T>> {
    let norm = Scheme::UnitNorm.norm(&pair.lambda)?;
    let lambda = pair
        .lambda
        .iter()
        .map(|l| l.clone() / norm.clone())
        .collect();
    AdmissiblePair::new(Scheme::UnitNorm, lambda, pair.beta.clone())
}

/// Maps `(λ*, β)` with `‖λ*‖₂ = 1` to `(λ*, β − (Σβᵢ/Σλ*ᵢ)λ*)`, which has
/// zero offset sum and describes the same leaf.
pub fn to_adm<T: Scalar>(lambda_star: &[T], beta: &[T]) -> Result<AdmissiblePair<T>> {
    if lambda_star.iter().any(|l| *l <= T::zero()) {
        return Err(Error::NotAdmissible("λ* must be positive".into()));
    }
    if lambda_star.len() != beta.len() {
        return Err(Error::NotAdmissible("λ* and β differ in length".into()));
    }
    let shift = sum(beta) / sum(lambda_star);
    let shifted = beta
        .iter()
        .zip(lambda_star)
        .map(|(b, l)| b.clone() - shift.clone() * l.clone())
        .collect();
    AdmissiblePair::new(Scheme::UnitNorm, lambda_star.to_vec(), shifted)
}

/// One failed check from [`validate_scheme`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationFailure {
    pub sample: usize,
    pub check: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub scheme: String,
    pub samples: usize,
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks on every sample point: the leaf through it exists and reproduces
/// it, has a positive direction, is recovered from a second point of the
/// same leaf, and lies inside `Δ⁺`.
pub fn validate_scheme<T: Scalar, R: Rng>(
    scheme: Scheme,
    samples: &[(Vec<T>, Vec<T>)],
    rng: &mut R,
) -> Result<ValidationReport> {
    if samples.iter().any(|(u, v)| !strictly_below(u, v)) {
        return Err(Error::NotStrictlyBelow);
    }
    let mut report = ValidationReport {
        scheme: scheme.to_string(),
        samples: samples.len(),
        failures: Vec::new(),
    };
    for (index, (u, v)) in samples.iter().enumerate() {
        let mut fail = |check: &'static str, detail: String| {
            report.failures.push(ValidationFailure {
                sample: index,
                check,
                detail,
            })
        };
        let (pair, coords) = match leaf_through(scheme, u, v) {
            Ok(found) => found,
            Err(err) => {
                fail("existence", err.to_string());
                continue;
            }
        };
        let scale = 1.0
            + magnitude(u).max(magnitude(v))
            + coords.s.to_f64().abs()
            + coords.t.to_f64().abs();
        let reproduces =
            |point: &[T], target: &[T]| point.iter().zip(target).all(|(a, b)| close(a, b, scale));
        if !reproduces(&pair.point(&coords.s), u) || !reproduces(&pair.point(&coords.t), v) {
            fail(
                "round-trip",
                format!("leaf {pair:?} at ({}, {})", coords.s, coords.t),
            );
        }
        if pair.lambda.iter().any(|l| *l <= T::zero()) {
            fail("positivity", format!("λ = {:?}", pair.lambda));
        }
        if coords.s >= coords.t {
            fail("ordering", format!("s = {} ≥ t = {}", coords.s, coords.t));
        }

        let draw = |rng: &mut R| T::from_f64(rng.gen_range(-10.0..10.0)).expect("finite");
        let (s2, t2) = {
            let a = draw(rng);
            let b = a.clone() + T::from_f64(rng.gen_range(0.01..10.0)).expect("finite");
            (a, b)
        };
        let (u2, v2) = (pair.point(&s2), pair.point(&t2));
        match leaf_through(scheme, &u2, &v2) {
            Ok((again, coords2)) => {
                let leaf_scale = scale + s2.to_f64().abs() + t2.to_f64().abs();
                if !again.approx_eq(&pair)
                    || !close(&coords2.s, &s2, leaf_scale)
                    || !close(&coords2.t, &t2, leaf_scale)
                {
                    fail("uniqueness", format!("second point gave {again:?}"));
                }
            }
            Err(err) => fail("uniqueness", err.to_string()),
        }
        if !strictly_below(&u2, &v2) {
            fail("inside", format!("({u2:?}, {v2:?}) is not in Δ⁺"));
        }
    }
    Ok(report)
}
