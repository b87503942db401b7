//! File formats: complex+filtration JSON, OFF meshes with per-vertex CSV
//! values, diagram CSV, and a static SVG rendering of a diagram.

use std::fmt::Write as _;

use serde_json::Value;

use crate::complex::{ComplexBuilder, SimplicialComplex, VectorFiltration};
use crate::diagram::{DiagramPoint, PersistenceDiagram};
use crate::error::{Error, Result};
use crate::multidist::FilteredComplex;
use crate::scalar::{Extended, Scalar};

fn number_text(value: &Value) -> Result<String> {
    match value {
        Value::Number(n) => Ok(n.to_string()),
        Value::String(s) => Ok(s.clone()),
        other => Err(Error::Malformed(format!(
            "expected a number, found {other}"
        ))),
    }
}

/// Reads `{"n": …, "vertex_values": [[…], …], "simplices": [[…], …]}`.
///
/// Every vertex with a value row belongs to the complex; the listed simplices
/// are closed under faces. Numbers may also be given as strings such as
/// `"1/3"`, which keeps them exact in rational mode.
pub fn read_complex_json<T: Scalar>(text: &str) -> Result<FilteredComplex<T>> {
    let doc: Value = serde_json::from_str(text)?;
    let rows = doc
        .get("vertex_values")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Malformed("missing \"vertex_values\" array".into()))?;
    let n = match doc.get("n") {
        Some(v) => v
            .as_u64()
            .ok_or_else(|| Error::Malformed("\"n\" must be a positive integer".into()))?
            as usize,
        None => rows
            .first()
            .and_then(Value::as_array)
            .map_or(1, |r| r.len()),
    };
    let values = rows
        .iter()
        .map(|row| match row {
            Value::Array(entries) => entries
                .iter()
                .map(|e| T::parse_str(&number_text(e)?))
                .collect::<Result<Vec<T>>>(),
            scalar => Ok(vec![T::parse_str(&number_text(scalar)?)?]),
        })
        .collect::<Result<Vec<_>>>()?;
    let simplices: Vec<Vec<usize>> = match doc.get("simplices") {
        Some(s) => serde_json::from_value(s.clone())?,
        None => Vec::new(),
    };
    if values.is_empty() {
        return Err(Error::EmptyComplex);
    }
    let max_dimension = simplices
        .iter()
        .map(|s| s.len().saturating_sub(1))
        .max()
        .unwrap_or(0);
    let complex = ComplexBuilder::new()
        .max_dimension(max_dimension.max(crate::complex::DEFAULT_MAX_DIMENSION))
        .vertex_count(values.len())
        .build(&simplices)?;
    let filtration = VectorFiltration::new(n, values)?;
    FilteredComplex::new(complex, filtration)
}

/// Writes the JSON form read by [`read_complex_json`]. Only maximal
/// simplices are listed.
pub fn write_complex_json<T: Scalar>(input: &FilteredComplex<T>) -> String {
    let complex = &input.complex;
    let maximal: Vec<&Vec<usize>> = complex
        .simplices()
        .iter()
        .filter(|s| {
            !complex
                .simplices_of_dim(s.len())
                .iter()
                .any(|c| s.iter().all(|v| c.contains(v)))
        })
        .collect();
    let doc = serde_json::json!({
        "n": input.filtration.components(),
        "vertex_values": input
            .filtration
            .values()
            .iter()
            .map(|row| row.iter().map(Scalar::to_json).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "simplices": maximal,
    });
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

/// Parses an OFF mesh. Vertex coordinates are ignored; polygonal faces are
/// fan-triangulated.
pub fn read_off(text: &str) -> Result<SimplicialComplex> {
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace);
    let header = tokens.next().ok_or(Error::EmptyComplex)?;
    let mut next_count = |what: &str| -> Result<usize> {
        tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Malformed(format!("OFF: bad {what}")))
    };
    let first = if header == "OFF" {
        next_count("vertex count")?
    } else if let Some(rest) = header.strip_prefix("OFF") {
        rest.parse()
            .map_err(|_| Error::Malformed("OFF: bad header".into()))?
    } else {
        return Err(Error::Malformed("missing OFF header".into()));
    };
    let vertex_count = first;
    let face_count = next_count("face count")?;
    let _edge_count = next_count("edge count")?;
    if vertex_count == 0 {
        return Err(Error::EmptyComplex);
    }
    let mut rest: Vec<&str> = Vec::new();
    for t in tokens {
        rest.push(t);
    }
    let mut cursor = 3 * vertex_count;
    if rest.len() < cursor {
        return Err(Error::Malformed("OFF: truncated vertex list".into()));
    }
    let mut simplices = Vec::with_capacity(face_count);
    for _ in 0..face_count {
        let size: usize = rest
            .get(cursor)
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Malformed("OFF: truncated face list".into()))?;
        let face: Vec<usize> = rest
            .get(cursor + 1..cursor + 1 + size)
            .ok_or_else(|| Error::Malformed("OFF: truncated face".into()))?
            .iter()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Malformed(format!("OFF: bad index {t}")))
            })
            .collect::<Result<_>>()?;
        cursor += 1 + size;
        match face.len() {
            0 => {}
            1..=3 => simplices.push(face),
            _ => {
                for i in 1..face.len() - 1 {
                    simplices.push(vec![face[0], face[i], face[i + 1]]);
                }
            }
        }
    }
    ComplexBuilder::new()
        .vertex_count(vertex_count)
        .build(&simplices)
}

/// One row per vertex, one column per component. A non-numeric first row is
/// treated as a header.
pub fn read_vertex_values_csv<T: Scalar>(text: &str) -> Result<VectorFiltration<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let parsed: Result<Vec<T>> = record.iter().map(T::parse_str).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if i == 0 => continue,
            Err(e) => return Err(e),
        }
    }
    let n = rows.first().map_or(0, Vec::len);
    if rows.is_empty() {
        return Err(Error::EmptyComplex);
    }
    VectorFiltration::new(n, rows)
}

pub fn read_off_with_values<T: Scalar>(off: &str, values_csv: &str) -> Result<FilteredComplex<T>> {
    let complex = read_off(off)?;
    let filtration = read_vertex_values_csv(values_csv)?;
    if filtration.vertex_count() != complex.vertex_count() {
        return Err(Error::LengthMismatch {
            expected: complex.vertex_count(),
            found: filtration.vertex_count(),
        });
    }
    FilteredComplex::new(complex, filtration)
}

pub const DIAGRAM_CSV_HEADER: [&str; 5] = ["u", "v", "multiplicity", "degree", "kind"];

/// Columns `u, v, multiplicity, degree, kind`, with `v = inf` for
/// cornerpoints at infinity and `kind` one of `proper`/`essential`.
pub fn write_diagram_csv<T: Scalar>(diagram: &PersistenceDiagram<T>) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(DIAGRAM_CSV_HEADER)?;
    for (point, mult) in diagram.points() {
        let kind = if point.is_at_infinity() {
            "essential"
        } else {
            "proper"
        };
        writer.write_record([
            point.birth.to_string(),
            point.death.to_string(),
            mult.to_string(),
            diagram.degree().to_string(),
            kind.to_string(),
        ])?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Reads a diagram CSV. The `degree` and `kind` columns are optional; rows
/// must agree on the degree.
pub fn read_diagram_csv<T: Scalar>(text: &str) -> Result<PersistenceDiagram<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let column = |name: &str| headers.iter().position(|h| h == name);
    let (u_col, v_col) = match (column("u"), column("v")) {
        (Some(u), Some(v)) => (u, v),
        _ => return Err(Error::Malformed("diagram CSV needs u and v columns".into())),
    };
    let mult_col = column("multiplicity");
    let degree_col = column("degree");
    let mut degree: Option<usize> = None;
    let mut points = Vec::new();
    for record in reader.records() {
        let record = record?;
        let field = |i: usize| {
            record
                .get(i)
                .ok_or_else(|| Error::Malformed(format!("short row {record:?}")))
        };
        let birth = T::parse_str(field(u_col)?)?;
        let death = Extended::<T>::parse_str(field(v_col)?)?;
        let mult = match mult_col {
            Some(i) => field(i)?
                .parse::<usize>()
                .map_err(|_| Error::Malformed(format!("bad multiplicity in {record:?}")))?,
            None => 1,
        };
        if let Some(i) = degree_col {
            let d: usize = field(i)?
                .parse()
                .map_err(|_| Error::Malformed(format!("bad degree in {record:?}")))?;
            if degree.is_some_and(|prev| prev != d) {
                return Err(Error::Malformed("rows disagree on the degree".into()));
            }
            degree = Some(d);
        }
        points.push((DiagramPoint::new(birth, death)?, mult));
    }
    PersistenceDiagram::from_points(degree.unwrap_or(0), points)
}

/// Static SVG of `Δ⁺`: the diagonal, proper cornerpoints as dots labeled by
/// multiplicity when above one, and cornerpoints at infinity as vertical rays.
pub fn diagram_svg<T: Scalar>(diagram: &PersistenceDiagram<T>) -> String {
    const SIZE: f64 = 400.0;
    const MARGIN: f64 = 40.0;
    let coords: Vec<f64> = diagram.coordinates().iter().map(Scalar::to_f64).collect();
    let (mut lo, mut hi) = match (coords.first(), coords.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (0.0, 1.0),
    };
    let pad = ((hi - lo) * 0.15).max(0.5);
    lo -= pad;
    hi += pad;
    let span = SIZE - 2.0 * MARGIN;
    let x = |u: f64| MARGIN + (u - lo) / (hi - lo) * span;
    let y = |v: f64| SIZE - MARGIN - (v - lo) / (hi - lo) * span;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (x0, y0, x1, y1) = (x(lo), y(lo), x(hi), y(hi));
    let _ = writeln!(
        svg,
        r##"<polygon points="{x0:.2},{y0:.2} {x1:.2},{y1:.2} {x0:.2},{y1:.2}" fill="#f2f5fb"/>"##
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="gray" stroke-dasharray="4 3"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}" stroke="black"/><line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" font-family="sans-serif">u</text><text x="{:.2}" y="{:.2}" font-size="12" font-family="sans-serif">v</text>"#,
        x1 - 10.0,
        y0 + 16.0,
        x0 - 16.0,
        y1 + 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{x0:.2}" y="{:.2}" font-size="12" font-family="sans-serif">degree {}</text>"#,
        MARGIN - 16.0,
        diagram.degree()
    );
    for (u, v, m) in diagram.proper() {
        let (cx, cy) = (x(u.to_f64()), y(v.to_f64()));
        let _ = writeln!(
            svg,
            r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="4" fill="steelblue"/>"#
        );
        if *m > 1 {
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" font-size="10" font-family="sans-serif">×{m}</text>"#,
                cx + 6.0,
                cy - 6.0
            );
        }
    }
    for (u, m) in diagram.at_infinity() {
        let cx = x(u.to_f64());
        let _ = writeln!(
            svg,
            r#"<line x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="firebrick" stroke-width="2"/>"#,
            y(u.to_f64()),
            MARGIN - 4.0
        );
        let _ = writeln!(
            svg,
            r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {cx:.2},{:.2}" fill="firebrick"/>"#,
            cx - 4.0,
            MARGIN + 4.0,
            cx + 4.0,
            MARGIN + 4.0,
            MARGIN - 6.0
        );
        if *m > 1 {
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" font-size="10" font-family="sans-serif">×{m}</text>"#,
                cx + 6.0,
                MARGIN + 12.0
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn reads_complex_json() {
        let text = r#"{"n": 1, "vertex_values": [[0], [0.5], ["1/3"]], "simplices": [[0, 1]]}"#;
        let fc: FilteredComplex<Rational> = read_complex_json(text).unwrap();
        assert_eq!(fc.complex.count_of_dim(0), 3);
        assert_eq!(fc.complex.count_of_dim(1), 1);
        assert_eq!(
            fc.filtration.vertex_value(2),
            &[Rational::from_i64(1) / Rational::from_i64(3)]
        );
        let again: FilteredComplex<Rational> = read_complex_json(&write_complex_json(&fc)).unwrap();
        assert_eq!(again.complex, fc.complex);
        assert_eq!(again.filtration, fc.filtration);
    }

    #[test]
    fn rejects_bad_complex_json() {
        assert!(matches!(
            read_complex_json::<f64>(r#"{"n": 1, "vertex_values": [], "simplices": []}"#),
            Err(Error::EmptyComplex)
        ));
        assert!(
            read_complex_json::<f64>(r#"{"n": 2, "vertex_values": [[0]], "simplices": []}"#)
                .is_err()
        );
        assert!(read_complex_json::<f64>(
            r#"{"n": 1, "vertex_values": [[0]], "simplices": [[0, 3]]}"#
        )
        .is_err());
        assert!(read_complex_json::<f64>("not json").is_err());
    }

    #[test]
    fn reads_off_and_values() {
        let off = "OFF\n# square\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n";
        let k = read_off(off).unwrap();
        assert_eq!(k.count_of_dim(2), 2);
        assert_eq!(k.count_of_dim(1), 5);
        let csv = "f,g\n0,1\n1,0\n2,2\n0.5,0.5\n";
        let fc: FilteredComplex<f64> = read_off_with_values(off, csv).unwrap();
        assert_eq!(fc.components(), 2);
        assert!(read_off_with_values::<f64>(off, "0\n1\n").is_err());
        assert!(read_off("PLY\n").is_err());
    }

    #[test]
    fn diagram_csv_round_trip() {
        let d = PersistenceDiagram::from_points(
            1,
            [
                (DiagramPoint::proper(0.0, 1.0).unwrap(), 2),
                (DiagramPoint::at_infinity(0.5), 1),
            ],
        )
        .unwrap();
        let text = write_diagram_csv(&d).unwrap();
        assert_eq!(
            text,
            "u,v,multiplicity,degree,kind\n0,1,2,1,proper\n0.5,inf,1,1,essential\n"
        );
        assert_eq!(read_diagram_csv::<f64>(&text).unwrap(), d);
        let minimal = read_diagram_csv::<f64>("u,v\n0,inf\n").unwrap();
        assert_eq!(minimal.infinite_count(), 1);
        assert!(read_diagram_csv::<f64>("u,v\n1,0\n").is_err());
        assert!(read_diagram_csv::<f64>("a,b\n1,0\n").is_err());
    }

    #[test]
    fn svg_contains_points_and_rays() {
        let d = PersistenceDiagram::from_points(
            0,
            [
                (DiagramPoint::proper(0.0, 1.0).unwrap(), 1),
                (DiagramPoint::at_infinity(0.0), 1),
            ],
        )
        .unwrap();
        let svg = diagram_svg(&d);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.contains("firebrick"));
        assert!(diagram_svg(&PersistenceDiagram::<f64>::empty(0)).ends_with("</svg>\n"));
    }
}
