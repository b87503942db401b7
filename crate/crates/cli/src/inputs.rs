use std::fs;
use std::path::Path;

use mdmatch_core::diagram::PersistenceDiagram;
use mdmatch_core::foliation::leaf_through;
use mdmatch_core::io;
use mdmatch_core::{AdmissiblePair, FilteredComplex, Scalar, Scheme};

use crate::{Failure, LeafArgs};

fn read(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn context(path: &str) -> impl Fn(mdmatch_core::Error) -> Failure + '_ {
    move |e| Failure::Input(format!("{path}: {e}"))
}

/// A complex with its filtration: `file.json`, or `mesh.off+values.csv`.
pub fn load_complex<T: Scalar>(spec: &str) -> Result<FilteredComplex<T>, Failure> {
    if let Some((mesh, values)) = spec.split_once('+') {
        return io::read_off_with_values(&read(mesh)?, &read(values)?).map_err(context(spec));
    }
    io::read_complex_json(&read(spec)?).map_err(context(spec))
}

pub fn is_diagram_csv(spec: &str) -> bool {
    Path::new(spec)
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

pub fn load_diagram<T: Scalar>(path: &str) -> Result<PersistenceDiagram<T>, Failure> {
    io::read_diagram_csv(&read(path)?).map_err(context(path))
}

fn parse_vector<T: Scalar>(text: &str) -> Result<Vec<T>, Failure> {
    text.split(',')
        .map(|t| T::parse_str(t.trim()).map_err(Failure::from))
        .collect()
}

fn parse_two<T: Scalar>(text: &str, what: &str) -> Result<(Vec<T>, Vec<T>), Failure> {
    let (a, b) = text
        .split_once(';')
        .ok_or_else(|| Failure::Input(format!("{what} must look like a1,…,an;b1,…,bn")))?;
    Ok((parse_vector(a)?, parse_vector(b)?))
}

/// The leaf named by --pair or --point, or the trivial leaf `(1, 0)` when
/// `n = 1` and neither is given.
pub fn resolve_leaf<T: Scalar>(
    leaf: &LeafArgs,
    scheme: Scheme,
    n: usize,
) -> Result<AdmissiblePair<T>, Failure> {
    let pair = match (&leaf.pair, &leaf.point) {
        (Some(text), _) => {
            let (lambda, beta) = parse_two(text, "--pair")?;
            AdmissiblePair::new(scheme, lambda, beta)?
        }
        (None, Some(text)) => {
            let (u, v) = parse_two(text, "--point")?;
            leaf_through(scheme, &u, &v)?.0
        }
        (None, None) if n == 1 => AdmissiblePair::new(scheme, vec![T::one()], vec![T::zero()])?,
        (None, None) => {
            return Err(Failure::Input(format!(
                "the input has {n} components: choose a leaf with --pair or --point"
            )))
        }
    };
    if pair.components() != n {
        return Err(Failure::Input(format!(
            "the leaf has {} components but the input has {n}",
            pair.components()
        )));
    }
    Ok(pair)
}
