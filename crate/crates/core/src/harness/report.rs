use std::fmt;
use std::path::PathBuf;

use super::config::ScalarMode;
use super::simulate::NormSample;
use crate::error::Error;
use crate::palindrome::StageTimings;
use crate::reference::{ErrorNorms, ObservedOrder};

#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    Completed,
    Unstable { step: usize, time: f64, norm: f64 },
}

/// Largest imaginary part of one primitive variable.
#[derive(Debug, Clone, PartialEq)]
pub struct ImagPeak {
    pub variable: String,
    pub value: f64,
    pub x: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowOutcome {
    Error(f64),
    /// The run diverged or hit an ill-conditioned block.
    Unstable(Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n_cells: usize,
    pub beta: f64,
    pub dt: f64,
    pub outcome: RowOutcome,
    /// Against the previous row, when both are stable.
    pub order: Option<ObservedOrder>,
}

impl ConvergenceRow {
    pub fn error(&self) -> Option<f64> {
        match self.outcome {
            RowOutcome::Error(e) => Some(e),
            RowOutcome::Unstable(_) => None,
        }
    }
}

/// Shock, rarefaction and imaginary-part diagnostics of a Riemann run.
#[derive(Debug, Clone, PartialEq)]
pub struct RiemannDiagnostics {
    /// Interface with the steepest jump of cell-mean density.
    pub shock_estimate: f64,
    /// Exact shock nearest to the estimate.
    pub shock_exact: Option<f64>,
    pub shock_offset_cells: Option<f64>,
    /// Mean `|ρ_h - ρ|` over the rarefaction fans divided by `|ρ_L - ρ_R|`.
    pub rarefaction_l1: Option<f64>,
    pub max_imag_rho: Option<f64>,
    pub max_imag_rho_x: Option<f64>,
    /// Distance from the `|Im ρ|` peak to the exact shock, in cells.
    pub imag_peak_offset_cells: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub scheme: String,
    pub scalar: ScalarMode,
    pub n_cells: usize,
    pub degree: usize,
    pub dt: f64,
    pub steps: usize,
    pub time: f64,
    pub termination: Termination,
    /// Against the exact solution, when the initial data has one.
    pub error: Option<ErrorNorms>,
    pub convergence: Vec<ConvergenceRow>,
    pub timings: StageTimings,
    /// Empty in real mode.
    pub max_imag: Vec<ImagPeak>,
    pub history: Vec<NormSample>,
    pub subcharacteristic_margin: f64,
    pub riemann: Option<RiemannDiagnostics>,
    pub outputs: Vec<PathBuf>,
}

impl RunReport {
    /// Observed orders of the convergence table, first row excluded.
    pub fn orders(&self) -> Vec<Option<ObservedOrder>> {
        self.convergence.iter().skip(1).map(|r| r.order).collect()
    }
}

fn fmt_order(o: Option<ObservedOrder>) -> String {
    match o {
        Some(ObservedOrder::Slope(s)) => format!("{s:.3}"),
        Some(ObservedOrder::RoundOffFloor(s)) => format!("{s:.3} (round-off floor)"),
        Some(ObservedOrder::Undefined) => "undefined".into(),
        None => "-".into(),
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "scheme {} ({:?}), {} cells of degree {}, dt {:.6e}",
            self.scheme, self.scalar, self.n_cells, self.degree, self.dt
        )?;
        match &self.termination {
            Termination::Completed => writeln!(f, "completed {} steps, t = {:.6e}", self.steps, self.time)?,
            Termination::Unstable { step, time, norm } => {
                writeln!(f, "unstable at step {step} (t = {time:.6e}), norm {norm:.3e}")?
            }
        }
        writeln!(f, "sub-characteristic margin {:.6e}", self.subcharacteristic_margin)?;
        if let Some(e) = &self.error {
            let parts: Vec<String> = e.conserved.iter().map(|v| format!("{v:.6e}")).collect();
            writeln!(f, "L2 error vs exact: conserved [{}]", parts.join(", "))?;
        }
        for p in &self.max_imag {
            writeln!(f, "max |Im {}| = {:.3e} at x = {:.6}", p.variable, p.value, p.x)?;
        }
        if !self.convergence.is_empty() {
            writeln!(f, "{:>8} {:>8} {:>14} {:>14}  order", "n_cells", "beta", "dt", "error")?;
            for r in &self.convergence {
                let err = match &r.outcome {
                    RowOutcome::Error(e) => format!("{e:14.6e}"),
                    RowOutcome::Unstable(_) => format!("{:>14}", "unstable"),
                };
                writeln!(f, "{:>8} {:>8} {:>14.6e} {err}  {}", r.n_cells, r.beta, r.dt, fmt_order(r.order))?;
            }
        }
        if let Some(r) = &self.riemann {
            writeln!(f, "shock estimate x = {:.6}", r.shock_estimate)?;
            if let (Some(x), Some(c)) = (r.shock_exact, r.shock_offset_cells) {
                writeln!(f, "exact shock x = {x:.6} ({c:.2} cells away)")?;
            }
            if let Some(l1) = r.rarefaction_l1 {
                writeln!(f, "rarefaction L1 error / jump = {l1:.3e}")?;
            }
            if let (Some(v), Some(x)) = (r.max_imag_rho, r.max_imag_rho_x) {
                writeln!(f, "max |Im rho| = {v:.3e} at x = {x:.6}")?;
            }
        }
        let t = &self.timings;
        writeln!(
            f,
            "wall clock: transport {:.3?} ({} stages), collide {:.3?} ({} stages)",
            t.transport, t.transport_stages, t.collide, t.collide_stages
        )?;
        for p in &self.outputs {
            writeln!(f, "wrote {}", p.display())?;
        }
        Ok(())
    }
}
