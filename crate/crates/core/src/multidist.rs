//! Multidimensional matching distance, sampled leaf by leaf.
//!
//! The value on one leaf is `minᵢ λᵢ · d_match` of the two reduced diagrams.
//! The distance is the supremum over all leaves; [`dmatch_nd`] evaluates a
//! finite grid of leaves and therefore returns a lower bound.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{SimplicialComplex, VectorFiltration};
use crate::diagram::{diagram_from_pairs, PersistenceDiagram};
use crate::error::{Error, Result};
use crate::foliation::{leaf_through, reduce_function, AdmissiblePair, Scheme};
use crate::homology::persistence_pairs;
use crate::linalg::FieldSpec;
use crate::matching::d_match;
use crate::scalar::{Extended, ExtendedReal, Scalar};

/// One filtered complex: the space `X` with its filtering function.
#[derive(Clone, Debug)]
pub struct FilteredComplex<T> {
    pub complex: SimplicialComplex,
    pub filtration: VectorFiltration<T>,
}

impl<T: Scalar> FilteredComplex<T> {
    pub fn new(complex: SimplicialComplex, filtration: VectorFiltration<T>) -> Result<Self> {
        filtration.check_covers(&complex)?;
        Ok(FilteredComplex {
            complex,
            filtration,
        })
    }

    pub fn components(&self) -> usize {
        self.filtration.components()
    }

    /// Degree-`k` diagram of the reduced filtration on the leaf of `pair`.
    pub fn leaf_diagram(
        &self,
        k: usize,
        pair: &AdmissiblePair<T>,
        field: FieldSpec,
    ) -> Result<PersistenceDiagram<T>> {
        let reduced = reduce_function(&self.complex, &self.filtration, pair)?;
        Ok(diagram_from_pairs(&persistence_pairs(
            &self.complex,
            &reduced,
            k,
            field,
        )?))
    }
}

/// A leaf together with the distance measured on it.
#[derive(Clone, Debug, PartialEq)]
pub struct LeafSample<T> {
    pub pair: AdmissiblePair<T>,
    pub value: ExtendedReal<T>,
}

fn check_components<T: Scalar>(
    x: &FilteredComplex<T>,
    y: &FilteredComplex<T>,
    pair: Option<&AdmissiblePair<T>>,
) -> Result<()> {
    if x.components() != y.components() {
        return Err(Error::ComponentMismatch {
            left: x.components(),
            right: y.components(),
        });
    }
    if let Some(pair) = pair {
        if pair.components() != x.components() {
            return Err(Error::ComponentMismatch {
                left: x.components(),
                right: pair.components(),
            });
        }
    }
    Ok(())
}

/// `minᵢ λᵢ · d_match(D_k(X, F^φ), D_k(Y, F^ψ))` on the leaf of `pair`.
pub fn leaf_distance<T: Scalar>(
    x: &FilteredComplex<T>,
    y: &FilteredComplex<T>,
    k: usize,
    pair: &AdmissiblePair<T>,
    field: FieldSpec,
) -> Result<ExtendedReal<T>> {
    check_components(x, y, Some(pair))?;
    let dx = x.leaf_diagram(k, pair, field)?;
    let dy = y.leaf_diagram(k, pair, field)?;
    Ok(d_match(&dx, &dy).scale(&pair.min_lambda()))
}

/// Finite sample of leaves.
///
/// Directions are the points `a/M` of the open simplex with positive integer
/// `a` and `M = 2·direction_resolution`, so every direction keeps a margin of
/// `1/M` from the boundary. Offsets take the values `B·j/Q` (`|j| ≤ Q`) in
/// their first `n−1` coordinates, the last one closing `Σβᵢ = 0`, and are
/// kept when all coordinates lie in `[−B, B]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSpec<T> {
    pub direction_resolution: usize,
    pub offset_resolution: usize,
    pub offset_bound: T,
}

pub const DEFAULT_DIRECTION_RESOLUTION: usize = 32;
pub const DEFAULT_OFFSET_RESOLUTION: usize = 16;

impl<T: Scalar> GridSpec<T> {
    pub fn new(
        direction_resolution: usize,
        offset_resolution: usize,
        offset_bound: T,
    ) -> Result<Self> {
        if direction_resolution == 0 || offset_resolution == 0 {
            return Err(Error::InvalidGrid("resolutions must be at least 1".into()));
        }
        if offset_bound <= T::zero() {
            return Err(Error::InvalidGrid(format!(
                "offset bound {offset_bound} must be positive"
            )));
        }
        Ok(GridSpec {
            direction_resolution,
            offset_resolution,
            offset_bound,
        })
    }

    /// Offset bound covering the value ranges of both functions.
    pub fn default_bound(x: &FilteredComplex<T>, y: &FilteredComplex<T>) -> T {
        let bound = x
            .filtration
            .values()
            .iter()
            .chain(y.filtration.values())
            .flatten()
            .map(Scalar::abs)
            .fold(T::zero(), |a, b| T::max_of(&a, &b));
        if bound > T::zero() {
            bound
        } else {
            T::one()
        }
    }

    pub fn with_defaults(x: &FilteredComplex<T>, y: &FilteredComplex<T>) -> Self {
        GridSpec {
            direction_resolution: DEFAULT_DIRECTION_RESOLUTION,
            offset_resolution: DEFAULT_OFFSET_RESOLUTION,
            offset_bound: Self::default_bound(x, y),
        }
    }

    /// True when every leaf of `coarser` is also a leaf of `self`.
    pub fn refines(&self, coarser: &GridSpec<T>) -> bool {
        self.offset_bound == coarser.offset_bound
            && self
                .direction_resolution
                .is_multiple_of(coarser.direction_resolution)
            && self
                .offset_resolution
                .is_multiple_of(coarser.offset_resolution)
    }

    /// Directions in `SumOne` normalization.
    pub fn directions(&self, n: usize) -> Vec<Vec<T>> {
        let total = 2 * self.direction_resolution;
        let denom = T::from_i64(total as i64);
        compositions(total, n)
            .into_iter()
            .map(|parts| {
                parts
                    .into_iter()
                    .map(|a| T::from_i64(a as i64) / denom.clone())
                    .collect()
            })
            .collect()
    }

    pub fn offsets(&self, n: usize) -> Vec<Vec<T>> {
        let q = self.offset_resolution as i64;
        let step = self.offset_bound.clone() / T::from_i64(q);
        let ticks: Vec<T> = (-q..=q).map(|j| step.clone() * T::from_i64(j)).collect();
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(n);
        fn recurse<T: Scalar>(
            free: usize,
            ticks: &[T],
            bound: &T,
            current: &mut Vec<T>,
            out: &mut Vec<Vec<T>>,
        ) {
            if current.len() == free {
                let last = -current.iter().fold(T::zero(), |a, b| a + b.clone());
                if last.abs() <= *bound {
                    let mut beta = current.clone();
                    beta.push(last);
                    out.push(beta);
                }
                return;
            }
            for t in ticks {
                current.push(t.clone());
                recurse(free, ticks, bound, current, out);
                current.pop();
            }
        }
        recurse(
            n.saturating_sub(1),
            &ticks,
            &self.offset_bound,
            &mut current,
            &mut out,
        );
        out
    }

    /// The grid as probe points `(β, λ + β)`, one per leaf.
    pub fn probe_points(&self, n: usize) -> Vec<(Vec<T>, Vec<T>)> {
        let directions = self.directions(n);
        let offsets = self.offsets(n);
        let mut probes = Vec::with_capacity(directions.len() * offsets.len());
        for lambda in &directions {
            for beta in &offsets {
                let v = lambda
                    .iter()
                    .zip(beta)
                    .map(|(l, b)| l.clone() + b.clone())
                    .collect();
                probes.push((beta.clone(), v));
            }
        }
        probes
    }

    pub fn to_json(&self, n: usize) -> serde_json::Value {
        serde_json::json!({
            "direction_resolution": self.direction_resolution,
            "offset_resolution": self.offset_resolution,
            "offset_bound": self.offset_bound.to_json(),
            "directions": self.directions(n).len(),
            "offsets": self.offsets(n).len(),
        })
    }
}

/// All `n`-tuples of positive integers summing to `total`.
fn compositions(total: usize, n: usize) -> Vec<Vec<usize>> {
    fn recurse(left: usize, parts: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            current.push(left);
            out.push(current.clone());
            current.pop();
            return;
        }
        for a in 1..=left.saturating_sub(parts - 1) {
            current.push(a);
            recurse(left - a, parts - 1, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    if n >= 1 && total >= n {
        recurse(total, n, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// Largest value among `samples`; ties go to the earliest sample.
fn max_sample<T: Scalar>(samples: Vec<LeafSample<T>>) -> Option<LeafSample<T>> {
    let mut best: Option<LeafSample<T>> = None;
    for sample in samples {
        let better = match &best {
            None => true,
            Some(b) => sample.value.cmp_ext(&b.value).is_gt(),
        };
        if better {
            best = Some(sample);
        }
    }
    best
}

/// Evaluates every probe point's leaf under `scheme`, in parallel.
pub fn evaluate_leaves<T: Scalar>(
    x: &FilteredComplex<T>,
    y: &FilteredComplex<T>,
    k: usize,
    scheme: Scheme,
    probes: &[(Vec<T>, Vec<T>)],
    field: FieldSpec,
) -> Result<Vec<LeafSample<T>>> {
    check_components(x, y, None)?;
    probes
        .par_iter()
        .map(|(u, v)| {
            let (pair, _) = leaf_through(scheme, u, v)?;
            let value = leaf_distance(x, y, k, &pair, field)?;
            Ok(LeafSample { pair, value })
        })
        .collect()
}

/// Grid estimate of the multidimensional matching distance.
#[derive(Clone, Debug)]
pub struct GridEstimate<T> {
    /// Maximum over the sampled leaves: a lower bound for the supremum.
    pub value: ExtendedReal<T>,
    pub argmax: AdmissiblePair<T>,
    pub leaves: usize,
}

/// Maximum of [`leaf_distance`] over the leaves of `grid`, each expressed in
/// `scheme`'s normalization.
pub fn dmatch_nd<T: Scalar>(
    x: &FilteredComplex<T>,
    y: &FilteredComplex<T>,
    k: usize,
    scheme: Scheme,
    grid: &GridSpec<T>,
    field: FieldSpec,
) -> Result<GridEstimate<T>> {
    check_components(x, y, None)?;
    let probes = grid.probe_points(x.components());
    let samples = evaluate_leaves(x, y, k, scheme, &probes, field)?;
    let leaves = samples.len();
    let best =
        max_sample(samples).ok_or_else(|| Error::InvalidGrid("grid has no leaves".into()))?;
    Ok(GridEstimate {
        value: best.value,
        argmax: best.pair,
        leaves,
    })
}

/// Spread of a set of values: `max − min`, `∞` when finite and infinite
/// values are mixed, `0` when all are infinite.
pub fn discrepancy<T: Scalar>(values: &[ExtendedReal<T>]) -> f64 {
    let infinite = values.iter().filter(|v| v.is_infinite()).count();
    if infinite == values.len() {
        return 0.0;
    }
    if infinite > 0 {
        return f64::INFINITY;
    }
    let finite: Vec<f64> = values.iter().map(Extended::to_f64).collect();
    let max = finite.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = finite.iter().cloned().fold(f64::INFINITY, f64::min);
    max - min
}

#[derive(Clone, Debug)]
pub struct ProbeResult<T> {
    pub u: Vec<T>,
    pub v: Vec<T>,
    /// One sample per scheme, in the order the schemes were given.
    pub samples: Vec<LeafSample<T>>,
    pub discrepancy: f64,
}

#[derive(Clone, Debug)]
pub struct InvarianceReport<T> {
    pub schemes: Vec<Scheme>,
    pub degree: usize,
    pub probes: Vec<ProbeResult<T>>,
    pub max_probe_discrepancy: f64,
    /// Per scheme, the grid estimate on the shared leaf-aligned grid.
    pub grid: Option<(GridSpec<T>, Vec<GridEstimate<T>>)>,
    pub grid_discrepancy: f64,
    pub timings_ms: Vec<(String, f64)>,
}

impl<T: Scalar> InvarianceReport<T> {
    pub fn max_discrepancy(&self) -> f64 {
        self.max_probe_discrepancy.max(self.grid_discrepancy)
    }

    pub fn to_json(&self, include_timings: bool) -> serde_json::Value {
        let vec_json = |v: &[T]| v.iter().map(Scalar::to_json).collect::<Vec<_>>();
        let number = |x: f64| {
            if x.is_finite() {
                serde_json::json!(x)
            } else {
                serde_json::json!("inf")
            }
        };
        let probes: Vec<_> = self
            .probes
            .iter()
            .map(|p| {
                serde_json::json!({
                    "u": vec_json(&p.u),
                    "v": vec_json(&p.v),
                    "values": p.samples.iter().map(|s| serde_json::json!({
                        "scheme": s.pair.scheme.to_string(),
                        "value": s.value.to_json(),
                    })).collect::<Vec<_>>(),
                    "discrepancy": number(p.discrepancy),
                })
            })
            .collect();
        let n = self.probes.first().map_or(1, |p| p.u.len());
        let grid = self.grid.as_ref().map(|(spec, estimates)| {
            serde_json::json!({
                "spec": spec.to_json(n),
                "per_scheme": estimates.iter().map(|e| serde_json::json!({
                    "scheme": e.argmax.scheme.to_string(),
                    "value": e.value.to_json(),
                    "argmax": e.argmax.to_json(),
                    "leaves": e.leaves,
                })).collect::<Vec<_>>(),
                "discrepancy": number(self.grid_discrepancy),
            })
        });
        let mut report = serde_json::json!({
            "mode": T::MODE,
            "degree": self.degree,
            "schemes": self.schemes.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "probes": probes,
            "max_probe_discrepancy": number(self.max_probe_discrepancy),
            "grid": grid,
            "max_discrepancy": number(self.max_discrepancy()),
        });
        if include_timings {
            report["timings_ms"] = self
                .timings_ms
                .iter()
                .map(|(name, ms)| (name.clone(), serde_json::json!(ms)))
                .collect::<serde_json::Map<_, _>>()
                .into();
        }
        report
    }
}

/// Evaluates every probe point's leaf under each scheme and measures how far
/// the per-leaf distances disagree; optionally repeats the comparison for the
/// grid maximum on a shared set of leaves.
pub fn invariance_report<T: Scalar>(
    x: &FilteredComplex<T>,
    y: &FilteredComplex<T>,
    k: usize,
    schemes: &[Scheme],
    probes: &[(Vec<T>, Vec<T>)],
    grid: Option<&GridSpec<T>>,
    field: FieldSpec,
) -> Result<InvarianceReport<T>> {
    check_components(x, y, None)?;
    if probes
        .iter()
        .any(|(u, v)| !crate::scalar::strictly_below(u, v))
    {
        return Err(Error::NotStrictlyBelow);
    }
    let mut timings = Vec::new();

    let start = Instant::now();
    let per_scheme: Vec<Vec<LeafSample<T>>> = schemes
        .iter()
        .map(|&scheme| evaluate_leaves(x, y, k, scheme, probes, field))
        .collect::<Result<_>>()?;
    timings.push(("probes".to_string(), start.elapsed().as_secs_f64() * 1e3));

    let results: Vec<ProbeResult<T>> = probes
        .iter()
        .enumerate()
        .map(|(i, (u, v))| {
            let samples: Vec<LeafSample<T>> = per_scheme.iter().map(|s| s[i].clone()).collect();
            let values: Vec<_> = samples.iter().map(|s| s.value.clone()).collect();
            ProbeResult {
                u: u.clone(),
                v: v.clone(),
                samples,
                discrepancy: discrepancy(&values),
            }
        })
        .collect();
    let max_probe_discrepancy = results.iter().map(|r| r.discrepancy).fold(0.0, f64::max);

    let (grid_result, grid_discrepancy) = match grid {
        Some(spec) => {
            let start = Instant::now();
            let estimates: Vec<GridEstimate<T>> = schemes
                .iter()
                .map(|&scheme| dmatch_nd(x, y, k, scheme, spec, field))
                .collect::<Result<_>>()?;
            timings.push(("grid".to_string(), start.elapsed().as_secs_f64() * 1e3));
            let values: Vec<_> = estimates.iter().map(|e| e.value.clone()).collect();
            let d = discrepancy(&values);
            (Some((spec.clone(), estimates)), d)
        }
        None => (None, 0.0),
    };

    Ok(InvarianceReport {
        schemes: schemes.to_vec(),
        degree: k,
        probes: results,
        max_probe_discrepancy,
        grid: grid_result,
        grid_discrepancy,
        timings_ms: timings,
    })
}
