//! CSV emission. Every file has a header row; complex runs split each value
//! into `_re` and `_im` columns. Numbers carry 17 significant digits.

use std::path::Path;

use super::report::{ConvergenceRow, RowOutcome};
use super::simulate::{NormSample, Simulation};
use crate::error::Result;
use crate::flux::Flux;
use crate::reference::ObservedOrder;
use crate::scalar::Scalar;

pub(crate) fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn push_value<S: Scalar>(row: &mut Vec<String>, v: S) {
    row.push(num(v.re()));
    if S::IS_COMPLEX {
        row.push(num(v.im()));
    }
}

fn push_name<S: Scalar>(header: &mut Vec<String>, name: &str) {
    if S::IS_COMPLEX {
        header.push(format!("{name}_re"));
        header.push(format!("{name}_im"));
    } else {
        header.push(name.to_string());
    }
}

/// `x` and the primitive variables at every node.
pub fn write_profile<S: Scalar>(path: &Path, sim: &Simulation<S>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["x".to_string()];
    for name in sim.model.flux.primitive_names() {
        push_name::<S>(&mut header, name);
    }
    w.write_record(&header)?;
    for (x, prim) in sim.mesh.nodes().iter().zip(sim.primitives()?) {
        let mut row = vec![num(*x)];
        for v in prim {
            push_value(&mut row, v);
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Numerical profile next to exact primitive values `exact(x)`.
pub fn write_overlay<S: Scalar>(path: &Path, sim: &Simulation<S>, exact: impl Fn(f64) -> Vec<f64>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let names = sim.model.flux.primitive_names();
    let mut header = vec!["x".to_string()];
    for name in names {
        push_name::<S>(&mut header, name);
    }
    header.extend(names.iter().map(|n| format!("{n}_exact")));
    w.write_record(&header)?;
    for (x, prim) in sim.mesh.nodes().iter().zip(sim.primitives()?) {
        let mut row = vec![num(*x)];
        for v in prim {
            push_value(&mut row, v);
        }
        row.extend(exact(*x).into_iter().map(num));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_history(path: &Path, history: &[NormSample]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["step", "time", "norm"])?;
    for s in history {
        w.write_record([s.step.to_string(), num(s.time), num(s.norm)])?;
    }
    w.flush()?;
    Ok(())
}

/// `n_cells, dt, error, slope`. Diverged rows read `unstable` in the error
/// column; slopes in the round-off floor read `floor`.
pub fn write_convergence(path: &Path, rows: &[ConvergenceRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["n_cells", "dt", "error", "slope"])?;
    for r in rows {
        let error = match &r.outcome {
            RowOutcome::Error(e) => num(*e),
            RowOutcome::Unstable(_) => "unstable".into(),
        };
        let slope = match r.order {
            Some(ObservedOrder::Slope(s)) => num(s),
            Some(ObservedOrder::RoundOffFloor(_)) => "floor".into(),
            Some(ObservedOrder::Undefined) => "undefined".into(),
            None => String::new(),
        };
        w.write_record([r.n_cells.to_string(), num(r.dt), error, slope])?;
    }
    w.flush()?;
    Ok(())
}
