//! Columnar text storage for reference fields.
//!
//! ```text
//! # palindg-reference v1
//! # a=-2 b=2 n_cells=80 degree=5 components=4 complex=false
//! x,f0,f1,f2,f3
//! -2.000000000000000e0,...
//! ```
//!
//! Complex fields store `f{i}_re,f{i}_im` column pairs. One row per node,
//! cell-major, so interface coordinates appear twice.

use std::io::{BufRead, BufReader, Read, Write};

use crate::dg::{DgMesh, KineticField};
use crate::error::{Error, Result};
use crate::scalar::{Complex64, Scalar};

const MAGIC: &str = "# palindg-reference v1";

/// Writes `f` with the mesh description needed to read it back.
pub fn write_reference<S: Scalar, W: Write>(out: W, mesh: &DgMesh, f: &KineticField<S>) -> Result<()> {
    let mut out = out;
    writeln!(out, "{MAGIC}")?;
    writeln!(
        out,
        "# a={:e} b={:e} n_cells={} degree={} components={} complex={}",
        mesh.a(),
        mesh.b(),
        mesh.n_cells(),
        mesh.degree(),
        f.n_components(),
        S::IS_COMPLEX
    )?;
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["x".to_string()];
    for i in 0..f.n_components() {
        if S::IS_COMPLEX {
            header.push(format!("f{i}_re"));
            header.push(format!("f{i}_im"));
        } else {
            header.push(format!("f{i}"));
        }
    }
    w.write_record(&header)?;
    let mut row = Vec::with_capacity(header.len());
    let mut node = vec![S::zero(); f.n_components()];
    for (p, &x) in mesh.nodes().iter().enumerate() {
        row.clear();
        row.push(format!("{x:.17e}"));
        f.gather(p, &mut node);
        for v in &node {
            row.push(format!("{:.17e}", v.re()));
            if S::IS_COMPLEX {
                row.push(format!("{:.17e}", v.im()));
            }
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a file written by [`write_reference`].
pub fn read_reference<S: Scalar, R: Read>(input: R) -> Result<(DgMesh, KineticField<S>)> {
    let mut reader = BufReader::new(input);
    let mut line = String::new();
    reader.read_line(&mut line)?;
    if line.trim_end() != MAGIC {
        return Err(Error::Io("not a reference file".into()));
    }
    line.clear();
    reader.read_line(&mut line)?;
    let meta = line.trim_start_matches('#').trim();
    let get = |key: &str| -> Result<&str> {
        meta.split_whitespace()
            .find_map(|kv| kv.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
            .ok_or_else(|| Error::Io(format!("reference header lacks {key}")))
    };
    let parse_f = |key: &str| -> Result<f64> { get(key)?.parse().map_err(|_| Error::Io(format!("bad {key}"))) };
    let parse_u = |key: &str| -> Result<usize> { get(key)?.parse().map_err(|_| Error::Io(format!("bad {key}"))) };
    let mesh = DgMesh::new(parse_f("a")?, parse_f("b")?, parse_u("n_cells")?, parse_u("degree")?)?;
    let n_comp = parse_u("components")?;
    let complex = get("complex")? == "true";
    if complex && !S::IS_COMPLEX {
        return Err(Error::Io("complex reference read into a real field".into()));
    }

    let mut f = KineticField::zeros(mesh.n_cells(), mesh.n_nodes(), n_comp);
    let mut node = vec![S::zero(); n_comp];
    let mut rows = 0;
    for (p, record) in csv::Reader::from_reader(reader).records().enumerate() {
        let record = record?;
        let values: Vec<f64> = record
            .iter()
            .skip(1)
            .map(|s| s.parse::<f64>().map_err(|_| Error::Io(format!("bad number {s:?}"))))
            .collect::<Result<_>>()?;
        if p >= f.n_points() || values.len() != n_comp * if complex { 2 } else { 1 } {
            return Err(Error::ShapeMismatch(format!("unexpected row {p} in reference data")));
        }
        for (i, v) in node.iter_mut().enumerate() {
            *v = if complex {
                S::from_complex(Complex64::new(values[2 * i], values[2 * i + 1])).expect("complex field")
            } else {
                S::from_real(values[i])
            };
        }
        f.scatter(p, &node);
        rows += 1;
    }
    if rows != f.n_points() {
        return Err(Error::ShapeMismatch(format!("{rows} rows, expected {}", f.n_points())));
    }
    Ok((mesh, f))
}
