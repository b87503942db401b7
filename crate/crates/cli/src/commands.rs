use std::fs;

use mdmatch_core::complex::ScalarFiltration;
use mdmatch_core::diagram::{diagram_from_pairs, rank_from_diagram, PersistenceDiagram};
use mdmatch_core::foliation::reduce_function;
use mdmatch_core::homology::{persistence_pairs, rank_oracle};
use mdmatch_core::matching::d_match;
use mdmatch_core::multidist::{dmatch_nd, invariance_report};
use mdmatch_core::random::{self, RandomComplexSpec, RandomValueSpec};
use mdmatch_core::{io, AdmissiblePair, FieldSpec, FilteredComplex, GridSpec, Scalar, Scheme};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::inputs::{is_diagram_csv, load_complex, load_diagram, resolve_leaf};
use crate::{Cli, Command, Failure, GridArgs, LeafArgs, RunConfig};

pub fn run<T: Scalar>(cli: &Cli) -> Result<(), Failure> {
    let config = &cli.config;
    let field = FieldSpec::new(config.field)?;
    match &cli.command {
        Command::Diagram { input, leaf, svg } => {
            diagram::<T>(config, field, input, leaf, svg.as_deref())
        }
        Command::Match { left, right, leaf } => matching::<T>(config, field, left, right, leaf),
        Command::Mdmatch { left, right, grid } => mdmatch::<T>(config, field, left, right, grid),
        Command::Invariance {
            left,
            right,
            schemes,
            probes,
            grid,
            tol,
            timings,
        } => invariance::<T>(
            config, field, left, right, schemes, *probes, grid, *tol, *timings,
        ),
        Command::Oracle {
            input,
            leaf,
            diagram,
            random,
        } => oracle::<T>(
            config,
            field,
            input.as_deref(),
            leaf,
            diagram.as_deref(),
            *random,
        ),
        Command::Random {
            vertices,
            components,
            edge_probability,
            max_dimension,
            levels,
            denominator,
        } => {
            if *components == 0
                || *levels < 0
                || *denominator <= 0
                || !(0.0..=1.0).contains(edge_probability)
            {
                return Err(Failure::Input("invalid random generator settings".into()));
            }
            let complex = RandomComplexSpec {
                vertices: *vertices,
                edge_probability: *edge_probability,
                max_dimension: *max_dimension,
                max_simplices: None,
            };
            let values = RandomValueSpec {
                levels: *levels,
                denominator: *denominator,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let x: FilteredComplex<T> =
                random::filtered_complex(&mut rng, &complex, *components, &values);
            emit(config, &io::write_complex_json(&x))
        }
    }
}

fn emit(config: &RunConfig, text: &str) -> Result<(), Failure> {
    match &config.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(config: &RunConfig, value: &serde_json::Value) -> Result<(), Failure> {
    emit(
        config,
        &(serde_json::to_string_pretty(value).expect("serializable") + "\n"),
    )
}

fn diagram<T: Scalar>(
    config: &RunConfig,
    field: FieldSpec,
    input: &str,
    leaf: &LeafArgs,
    svg: Option<&std::path::Path>,
) -> Result<(), Failure> {
    let x: FilteredComplex<T> = load_complex(input)?;
    let pair = resolve_leaf(leaf, config.scheme, x.components())?;
    let d = x.leaf_diagram(config.k, &pair, field)?;
    if let Some(path) = svg {
        fs::write(path, io::diagram_svg(&d))
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    emit(config, &io::write_diagram_csv(&d)?)
}

fn matching<T: Scalar>(
    config: &RunConfig,
    field: FieldSpec,
    left: &str,
    right: &str,
    leaf: &LeafArgs,
) -> Result<(), Failure> {
    let (a, b): (PersistenceDiagram<T>, PersistenceDiagram<T>) =
        match (is_diagram_csv(left), is_diagram_csv(right)) {
            (true, true) => (load_diagram(left)?, load_diagram(right)?),
            (false, false) => {
                let x: FilteredComplex<T> = load_complex(left)?;
                let y: FilteredComplex<T> = load_complex(right)?;
                if x.components() != y.components() {
                    return Err(mdmatch_core::Error::ComponentMismatch {
                        left: x.components(),
                        right: y.components(),
                    }
                    .into());
                }
                let pair = resolve_leaf(leaf, config.scheme, x.components())?;
                (
                    x.leaf_diagram(config.k, &pair, field)?,
                    y.leaf_diagram(config.k, &pair, field)?,
                )
            }
            _ => {
                return Err(Failure::Input(
                    "compare two diagram CSVs or two complexes, not one of each".into(),
                ))
            }
        };
    emit_json(config, &json!({ "distance": d_match(&a, &b).to_json() }))
}

fn grid_spec<T: Scalar>(
    args: &GridArgs,
    x: &FilteredComplex<T>,
    y: &FilteredComplex<T>,
) -> Result<GridSpec<T>, Failure> {
    let bound = match &args.bound {
        Some(text) => T::parse_str(text)?,
        None => GridSpec::default_bound(x, y),
    };
    let Some(text) = &args.grid else {
        let defaults = GridSpec::with_defaults(x, y);
        return Ok(GridSpec::new(
            defaults.direction_resolution,
            defaults.offset_resolution,
            bound,
        )?);
    };
    let parsed = text
        .split_once('x')
        .and_then(|(d, o)| Some((d.trim().parse().ok()?, o.trim().parse().ok()?)));
    let Some((directions, offsets)) = parsed else {
        return Err(Failure::Input(format!(
            "--grid {text}: expected <directions>x<offsets>"
        )));
    };
    Ok(GridSpec::new(directions, offsets, bound)?)
}

fn load_pair<T: Scalar>(
    left: &str,
    right: &str,
) -> Result<(FilteredComplex<T>, FilteredComplex<T>), Failure> {
    let x = load_complex(left)?;
    let y = load_complex(right)?;
    if x.components() != y.components() {
        return Err(mdmatch_core::Error::ComponentMismatch {
            left: x.components(),
            right: y.components(),
        }
        .into());
    }
    Ok((x, y))
}

fn mdmatch<T: Scalar>(
    config: &RunConfig,
    field: FieldSpec,
    left: &str,
    right: &str,
    grid: &GridArgs,
) -> Result<(), Failure> {
    let (x, y) = load_pair::<T>(left, right)?;
    let spec = grid_spec(grid, &x, &y)?;
    let estimate = dmatch_nd(&x, &y, config.k, config.scheme, &spec, field)?;
    emit_json(
        config,
        &json!({
            "mode": T::MODE,
            "degree": config.k,
            "scheme": config.scheme.to_string(),
            "value": estimate.value.to_json(),
            "argmax_pair": estimate.argmax.to_json(),
            "grid": spec.to_json(x.components()),
            "leaves": estimate.leaves,
            "lower_bound": true,
        }),
    )
}

/// Probe points on a lattice over the value range of both inputs, with
/// every fifth one close to the diagonal.
fn lattice_probes<T: Scalar>(
    rng: &mut ChaCha8Rng,
    x: &FilteredComplex<T>,
    y: &FilteredComplex<T>,
    count: usize,
) -> Vec<(Vec<T>, Vec<T>)> {
    const STEPS: i64 = 64;
    let all: Vec<&T> = x
        .filtration
        .values()
        .iter()
        .chain(y.filtration.values())
        .flatten()
        .collect();
    let lo = all.iter().fold((*all[0]).clone(), |a, b| T::min_of(&a, b));
    let hi = all.iter().fold((*all[0]).clone(), |a, b| T::max_of(&a, b));
    let span = if hi > lo { hi - lo.clone() } else { T::one() };
    let step = span / T::from_i64(STEPS);
    let start = lo - step.clone() * T::from_i64(STEPS / 4);
    (0..count)
        .map(|i| {
            let near = i % 5 == 4;
            let u: Vec<T> = (0..x.components())
                .map(|_| {
                    start.clone() + step.clone() * T::from_i64(rng.gen_range(0..=STEPS + STEPS / 2))
                })
                .collect();
            let v = u
                .iter()
                .map(|a| {
                    let gap = if near {
                        step.clone() / T::from_i64(rng.gen_range(8..=64))
                    } else {
                        step.clone() * T::from_i64(rng.gen_range(1..=STEPS))
                    };
                    a.clone() + gap
                })
                .collect();
            (u, v)
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn invariance<T: Scalar>(
    config: &RunConfig,
    field: FieldSpec,
    left: &str,
    right: &str,
    schemes: &str,
    probes: usize,
    grid: &GridArgs,
    tol: f64,
    timings: bool,
) -> Result<(), Failure> {
    let schemes: Vec<Scheme> = schemes
        .split(',')
        .map(|s| s.trim().parse::<Scheme>().map_err(Failure::from))
        .collect::<Result<_, _>>()?;
    if schemes.is_empty() {
        return Err(Failure::Input("no schemes given".into()));
    }
    let (x, y) = load_pair::<T>(left, right)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let points = lattice_probes(&mut rng, &x, &y, probes);
    let spec = match grid.grid {
        Some(_) => Some(grid_spec(grid, &x, &y)?),
        None => None,
    };
    let report = invariance_report(&x, &y, config.k, &schemes, &points, spec.as_ref(), field)?;
    let mut value = report.to_json(timings);
    value["tolerance"] = json!(tol);
    value["seed"] = json!(config.seed);
    value["passed"] = json!(report.max_discrepancy() <= tol);
    emit_json(config, &value)?;
    if report.max_discrepancy() <= tol {
        Ok(())
    } else {
        Err(Failure::Violation(format!(
            "scheme discrepancy {} exceeds tolerance {tol}",
            report.max_discrepancy()
        )))
    }
}

/// Ranks from the definition, from the pairs and from `diagram` on the
/// critical values of the reduced function, their midpoints and one point
/// beyond each end.
fn oracle_check<T: Scalar>(
    x: &FilteredComplex<T>,
    k: usize,
    pair: &AdmissiblePair<T>,
    diagram: Option<&PersistenceDiagram<T>>,
    field: FieldSpec,
) -> Result<(usize, Vec<serde_json::Value>), Failure> {
    let reduced: ScalarFiltration<T> = reduce_function(&x.complex, &x.filtration, pair)?;
    let pairs = persistence_pairs(&x.complex, &reduced, k, field)?;
    let computed = diagram_from_pairs(&pairs);
    let diagram = diagram.unwrap_or(&computed);
    let critical = reduced.critical_values();
    let mut grid = critical.clone();
    grid.extend(
        critical
            .windows(2)
            .map(|w| (w[0].clone() + w[1].clone()).half()),
    );
    if let (Some(first), Some(last)) = (critical.first(), critical.last()) {
        grid.push(first.clone() - T::one());
        grid.push(last.clone() + T::one());
    }
    grid.sort_by(|a, b| a.total_cmp(b));
    let mut checked = 0;
    let mut disagreements = Vec::new();
    for (i, s) in grid.iter().enumerate() {
        for t in &grid[i + 1..] {
            let definition = rank_oracle(
                &x.complex,
                &x.filtration,
                k,
                &pair.point(s),
                &pair.point(t),
                field,
            )?;
            let from_pairs = pairs.rank_at(s, t);
            let from_diagram = rank_from_diagram(diagram, s, t);
            checked += 1;
            if definition != from_pairs || definition != from_diagram {
                disagreements.push(json!({
                    "s": s.to_json(),
                    "t": t.to_json(),
                    "definition": definition,
                    "pairs": from_pairs,
                    "diagram": from_diagram,
                }));
            }
        }
    }
    Ok((checked, disagreements))
}

fn oracle<T: Scalar>(
    config: &RunConfig,
    field: FieldSpec,
    input: Option<&str>,
    leaf: &LeafArgs,
    diagram_path: Option<&std::path::Path>,
    random: Option<usize>,
) -> Result<(), Failure> {
    let report = match (input, random) {
        (Some(path), None) => {
            let x: FilteredComplex<T> = load_complex(path)?;
            let pair = resolve_leaf(leaf, config.scheme, x.components())?;
            let supplied = match diagram_path {
                Some(p) => Some(load_diagram::<T>(&p.to_string_lossy())?),
                None => None,
            };
            let (checked, disagreements) =
                oracle_check(&x, config.k, &pair, supplied.as_ref(), field)?;
            json!({
                "mode": T::MODE,
                "degree": config.k,
                "leaf": pair.to_json(),
                "checked": checked,
                "disagreements": disagreements,
            })
        }
        (None, Some(count)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let mut checked = 0;
            let mut disagreements = Vec::new();
            for index in 0..count {
                let spec = RandomComplexSpec::default();
                let x: FilteredComplex<T> =
                    random::filtered_complex(&mut rng, &spec, 1, &RandomValueSpec::default());
                let pair = AdmissiblePair::new(config.scheme, vec![T::one()], vec![T::zero()])?;
                let (c, d) = oracle_check(&x, config.k, &pair, None, field)?;
                checked += c;
                disagreements.extend(d.into_iter().map(|mut entry| {
                    entry["complex"] = json!(index);
                    entry
                }));
            }
            json!({
                "mode": T::MODE,
                "degree": config.k,
                "seed": config.seed,
                "complexes": count,
                "checked": checked,
                "disagreements": disagreements,
            })
        }
        _ => {
            return Err(Failure::Input(
                "give an input file or --random <count>".into(),
            ))
        }
    };
    let failed = !report["disagreements"]
        .as_array()
        .is_some_and(Vec::is_empty);
    emit_json(config, &report)?;
    if failed {
        Err(Failure::Violation("rank computations disagree".into()))
    } else {
        Ok(())
    }
}
