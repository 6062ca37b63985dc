//! Experiment drivers: single runs, convergence studies and the Riemann
//! comparison.

use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;

use super::config::{InitKind, ReferenceKind, RunConfig, ScalarMode, StudyAxis};
use super::output::{write_convergence, write_history, write_overlay, write_profile};
use super::report::{ConvergenceRow, ImagPeak, RiemannDiagnostics, RowOutcome, RunReport, Termination};
use super::simulate::{simulate, Simulation};
use crate::dg::{DgMesh, KineticField};
use crate::error::{Error, Result};
use crate::flux::{Flux, FluxModel};
use crate::lattice::LatticeModel;
use crate::reference::{
    l2_error, observed_order, read_reference, restrict_to_mesh, sample_field, solve_riemann_isothermal,
    write_reference, ContactWave, ErrorNorms, IsothermalRiemann, Wave,
};
use crate::scalar::{Complex64, Scalar};

/// Closed-form solution of a configuration, in conservative variables.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactSolution {
    ContactWave(ContactWave),
    Riemann { solution: IsothermalRiemann, x0: f64 },
}

impl ExactSolution {
    pub fn from_config(cfg: &RunConfig) -> Result<Option<Self>> {
        if !cfg.has_exact_solution() {
            return Ok(None);
        }
        Ok(Some(match cfg.run.init {
            InitKind::ContactWave => ExactSolution::ContactWave(ContactWave {
                gamma: cfg.model.gamma.unwrap_or(1.4),
                ..ContactWave::default()
            }),
            _ => {
                let c = cfg.model.c.expect("validated");
                let (l, r) = (&cfg.run.left, &cfg.run.right);
                ExactSolution::Riemann {
                    solution: solve_riemann_isothermal(l[0], l[1] / l[0], r[0], r[1] / r[0], c)?,
                    x0: cfg.run.x0,
                }
            }
        }))
    }

    pub fn conservative(&self, x: f64, t: f64) -> Vec<f64> {
        match self {
            ExactSolution::ContactWave(c) => c.state(x, t).to_vec(),
            ExactSolution::Riemann { solution, x0 } => {
                let (rho, u) = solution.sample_at(x, *x0, t);
                vec![rho, rho * u]
            }
        }
    }

    pub fn primitive(&self, x: f64, t: f64) -> Vec<f64> {
        match self {
            ExactSolution::ContactWave(c) => vec![c.density(x, t), c.velocity, c.pressure],
            ExactSolution::Riemann { solution, x0 } => {
                let (rho, u) = solution.sample_at(x, *x0, t);
                vec![rho, u]
            }
        }
    }
}

/// Distance of `sim` to the exact solution at its final time. The kinetic
/// part compares with the equilibrium of the exact state.
pub fn exact_error<S: Scalar>(sim: &Simulation<S>, exact: &ExactSolution) -> Result<ErrorNorms> {
    let reference = equilibrium_field::<S>(&sim.mesh, &sim.model, |x| exact.conservative(x, sim.time))?;
    l2_error(&sim.field, &reference, &sim.mesh)
}

fn equilibrium_field<S: Scalar>(
    mesh: &DgMesh,
    model: &LatticeModel<FluxModel>,
    w: impl Fn(f64) -> Vec<f64>,
) -> Result<KineticField<S>> {
    let nv = model.n_velocities();
    let mut failure = None;
    let f = sample_field(mesh, nv, |_, x| {
        let w: Vec<S> = w(x).into_iter().map(S::from_real).collect();
        model.maxwellian(&w).unwrap_or_else(|e| {
            failure.get_or_insert(e);
            vec![S::zero(); nv]
        })
    })?;
    failure.map_or(Ok(f), Err)
}

fn output_path(cfg: &RunConfig, suffix: &str) -> Result<PathBuf> {
    let dir = cfg.output_dir();
    fs::create_dir_all(&dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    Ok(dir.join(format!("{}_{suffix}.csv", cfg.output.stem)))
}

fn base_report<S: Scalar>(cfg: &RunConfig, sim: &Simulation<S>) -> Result<RunReport> {
    let max_imag = if S::IS_COMPLEX {
        sim.max_imag()?
            .into_iter()
            .zip(sim.model.flux.primitive_names())
            .map(|((value, x), name)| ImagPeak {
                variable: name.to_string(),
                value,
                x,
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(RunReport {
        scheme: cfg.scheme.name.clone(),
        scalar: cfg.scalar_mode()?,
        n_cells: sim.mesh.n_cells(),
        degree: sim.mesh.degree(),
        dt: sim.dt,
        steps: sim.steps,
        time: sim.time,
        termination: Termination::Completed,
        error: None,
        convergence: Vec::new(),
        timings: sim.timings,
        max_imag,
        history: sim.history.clone(),
        subcharacteristic_margin: sim.subcharacteristic_margin,
        riemann: None,
        outputs: Vec::new(),
    })
}

/// Runs `cfg` and writes the final profile (and norm history, if asked).
pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate()?;
    match cfg.scalar_mode()? {
        ScalarMode::Real => run_typed::<f64>(cfg),
        ScalarMode::Complex => run_typed::<Complex64>(cfg),
    }
}

fn run_typed<S: Scalar>(cfg: &RunConfig) -> Result<RunReport> {
    let sim = simulate::<S>(cfg)?;
    let mut report = base_report(cfg, &sim)?;
    if let Some(exact) = ExactSolution::from_config(cfg)? {
        report.error = Some(exact_error(&sim, &exact)?);
    }
    write_outputs(cfg, &sim, &mut report)?;
    Ok(report)
}

fn write_outputs<S: Scalar>(cfg: &RunConfig, sim: &Simulation<S>, report: &mut RunReport) -> Result<()> {
    if cfg.output.profile {
        let path = output_path(cfg, "profile")?;
        write_profile(&path, sim)?;
        report.outputs.push(path);
    }
    if cfg.output.history {
        let path = output_path(cfg, "history")?;
        write_history(&path, &sim.history)?;
        report.outputs.push(path);
    }
    Ok(())
}

/// Whether a failed study run counts as a diverged row rather than an error.
fn is_instability(e: &Error) -> bool {
    match e {
        Error::Unstable { .. } | Error::SingularBlock { .. } => true,
        Error::Stage { source, .. } => is_instability(source),
        _ => false,
    }
}

/// Convergence study: one run per resolution, errors against the configured
/// reference, slopes between consecutive stable rows.
pub fn converge(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate()?;
    match cfg.scalar_mode()? {
        ScalarMode::Real => converge_typed::<f64>(cfg),
        ScalarMode::Complex => converge_typed::<Complex64>(cfg),
    }
}

/// Configurations of the study rows, coarsest first.
pub fn study_configs(cfg: &RunConfig) -> Result<Vec<RunConfig>> {
    let rows: Vec<RunConfig> = match cfg.study.axis {
        StudyAxis::Mesh => cfg
            .study
            .n_cells
            .iter()
            .map(|&n| {
                let mut c = cfg.clone();
                c.mesh.n_cells = n;
                c
            })
            .collect(),
        StudyAxis::Dt => cfg
            .study
            .betas
            .iter()
            .map(|&b| {
                let mut c = cfg.clone();
                c.scheme.beta = b;
                c
            })
            .collect(),
    };
    if rows.len() < 3 {
        return Err(Error::Config("a convergence study needs at least three resolutions".into()));
    }
    Ok(rows)
}

/// Configuration of the self-refined reference run.
pub fn reference_config(cfg: &RunConfig) -> Result<RunConfig> {
    let mut r = cfg.clone();
    if let Some(name) = &cfg.study.reference_scheme {
        r.scheme.name = name.clone();
    }
    r.scheme.scalar = Some(cfg.scalar_mode()?);
    let k = cfg.study.reference_refinement;
    match cfg.study.axis {
        StudyAxis::Mesh => {
            let finest = cfg.study.n_cells.iter().copied().max().unwrap_or(cfg.mesh.n_cells);
            r.mesh.n_cells = finest * k;
        }
        StudyAxis::Dt => {
            let smallest = cfg.study.betas.iter().copied().fold(f64::INFINITY, f64::min);
            r.scheme.beta = smallest / k as f64;
        }
    }
    Ok(r)
}

fn load_or_compute_reference<S: Scalar>(cfg: &RunConfig) -> Result<(DgMesh, KineticField<S>)> {
    let rcfg = reference_config(cfg)?;
    if let Some(path) = &cfg.study.reference_cache {
        if path.exists() {
            let file = fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let (mesh, field) = read_reference::<S, _>(file)?;
            let m = &rcfg.mesh;
            if mesh.n_cells() == m.n_cells && mesh.degree() == m.degree && mesh.a() == m.a && mesh.b() == m.b {
                return Ok((mesh, field));
            }
            return Err(Error::Config(format!(
                "reference cache {} was written for a different mesh",
                path.display()
            )));
        }
    }
    let sim = simulate::<S>(&rcfg)?;
    if let Some(path) = &cfg.study.reference_cache {
        let file = fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        write_reference(std::io::BufWriter::new(file), &sim.mesh, &sim.field)?;
    }
    Ok((sim.mesh, sim.field))
}

enum Reference<S> {
    Exact(ExactSolution),
    Field(DgMesh, KineticField<S>),
}

fn study_error<S: Scalar>(sim: &Simulation<S>, reference: &Reference<S>) -> Result<f64> {
    match reference {
        Reference::Exact(exact) => {
            let e = exact_error(sim, exact)?;
            Ok(e.conserved.iter().map(|v| v * v).sum::<f64>().sqrt())
        }
        Reference::Field(mesh, field) => {
            let restricted = restrict_to_mesh(field, mesh, &sim.mesh);
            Ok(l2_error(&sim.field, &restricted, &sim.mesh)?.kinetic)
        }
    }
}

fn converge_typed<S: Scalar>(cfg: &RunConfig) -> Result<RunReport> {
    let configs = study_configs(cfg)?;
    let (reference, runs) = rayon::join(
        || -> Result<Reference<S>> {
            Ok(match cfg.study.reference {
                ReferenceKind::Exact => Reference::Exact(ExactSolution::from_config(cfg)?.expect("validated")),
                ReferenceKind::SelfRefined => {
                    let (mesh, field) = load_or_compute_reference::<S>(cfg)?;
                    Reference::Field(mesh, field)
                }
            })
        },
        || configs.par_iter().map(simulate::<S>).collect::<Vec<_>>(),
    );
    let reference = reference?;
    let mut rows = Vec::with_capacity(configs.len());
    let mut finest: Option<Simulation<S>> = None;
    for (c, outcome) in configs.iter().zip(runs) {
        let mesh = DgMesh::new(c.mesh.a, c.mesh.b, c.mesh.n_cells, c.mesh.degree)?;
        let dt = mesh.cfl_dt(c.scheme.beta, c.model.lambda);
        let outcome = match outcome {
            Ok(sim) => {
                let e = study_error(&sim, &reference)?;
                finest = Some(sim);
                RowOutcome::Error(e)
            }
            Err(e) if is_instability(&e) => RowOutcome::Unstable(e),
            Err(e) => return Err(e),
        };
        rows.push(ConvergenceRow {
            n_cells: c.mesh.n_cells,
            beta: c.scheme.beta,
            dt,
            outcome,
            order: None,
        });
    }
    for i in 1..rows.len() {
        if let (Some(e0), Some(e1)) = (rows[i - 1].error(), rows[i].error()) {
            let size = |r: &ConvergenceRow| match cfg.study.axis {
                StudyAxis::Mesh => (cfg.mesh.b - cfg.mesh.a) / r.n_cells as f64,
                StudyAxis::Dt => r.dt,
            };
            let o = observed_order(&[e0, e1], &[size(&rows[i - 1]), size(&rows[i])])?;
            rows[i].order = Some(o[0]);
        }
    }
    let mut report = match &finest {
        Some(sim) => base_report(cfg, sim)?,
        None => {
            let last = &configs[configs.len() - 1];
            RunReport {
                scheme: cfg.scheme.name.clone(),
                scalar: cfg.scalar_mode()?,
                n_cells: last.mesh.n_cells,
                degree: last.mesh.degree,
                dt: rows[rows.len() - 1].dt,
                steps: 0,
                time: 0.0,
                termination: Termination::Completed,
                error: None,
                convergence: Vec::new(),
                timings: Default::default(),
                max_imag: Vec::new(),
                history: Vec::new(),
                subcharacteristic_margin: f64::NAN,
                riemann: None,
                outputs: Vec::new(),
            }
        }
    };
    if let Some(RowOutcome::Unstable(e)) = rows.last().map(|r| &r.outcome) {
        report.termination = match e {
            Error::Unstable { step, time, norm } => Termination::Unstable {
                step: *step,
                time: *time,
                norm: *norm,
            },
            _ => Termination::Unstable {
                step: 0,
                time: 0.0,
                norm: f64::NAN,
            },
        };
    }
    report.convergence = rows;
    let path = output_path(cfg, "convergence")?;
    write_convergence(&path, &report.convergence)?;
    report.outputs.push(path);
    Ok(report)
}

/// Runs an isothermal Riemann problem and compares with the exact solution.
pub fn riemann_compare(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate()?;
    if cfg.model.name != "isothermal" || cfg.run.init != InitKind::Riemann {
        return Err(Error::Config("riemann comparison needs the isothermal model and riemann data".into()));
    }
    match cfg.scalar_mode()? {
        ScalarMode::Real => riemann_typed::<f64>(cfg),
        ScalarMode::Complex => riemann_typed::<Complex64>(cfg),
    }
}

fn riemann_typed<S: Scalar>(cfg: &RunConfig) -> Result<RunReport> {
    let sim = simulate::<S>(cfg)?;
    let exact = ExactSolution::from_config(cfg)?.expect("isothermal riemann data");
    let mut report = base_report(cfg, &sim)?;
    report.error = Some(exact_error(&sim, &exact)?);
    report.riemann = Some(riemann_diagnostics(&sim, &exact)?);
    write_outputs(cfg, &sim, &mut report)?;
    let path = output_path(cfg, "overlay")?;
    write_overlay(&path, &sim, |x| exact.primitive(x, sim.time))?;
    report.outputs.push(path);
    Ok(report)
}

/// Cell means of the real part of conservative component `k`.
fn cell_means<S: Scalar>(sim: &Simulation<S>, k: usize) -> Vec<f64> {
    let np = sim.mesh.n_nodes();
    let w = sim.mesh.weights();
    let (minus, plus) = (sim.field.component(2 * k), sim.field.component(2 * k + 1));
    (0..sim.mesh.n_cells())
        .map(|cell| {
            (0..np)
                .map(|i| 0.5 * w[i] * (minus[cell * np + i] + plus[cell * np + i]).re())
                .sum()
        })
        .collect()
}

pub fn riemann_diagnostics<S: Scalar>(sim: &Simulation<S>, exact: &ExactSolution) -> Result<RiemannDiagnostics> {
    let ExactSolution::Riemann { solution, x0 } = exact else {
        return Err(Error::Config("riemann diagnostics need an isothermal riemann solution".into()));
    };
    let mesh = &sim.mesh;
    let h = mesh.h();
    let means = cell_means(sim, 0);
    let steepest = (0..means.len().saturating_sub(1))
        .max_by(|&i, &j| {
            let di = (means[i + 1] - means[i]).abs();
            let dj = (means[j + 1] - means[j]).abs();
            di.total_cmp(&dj)
        })
        .unwrap_or(0);
    let shock_estimate = mesh.a() + (steepest + 1) as f64 * h;
    let shock_exact = solution
        .shock_positions(*x0, sim.time)
        .into_iter()
        .min_by(|a, b| (a - shock_estimate).abs().total_cmp(&(b - shock_estimate).abs()));

    let jump = (solution.left.0 - solution.right.0).abs();
    let np = mesh.n_nodes();
    let weights = mesh.weights();
    let mut fan_error = 0.0;
    let mut fan_width = 0.0;
    for wave in &solution.waves {
        if let Wave::Rarefaction { head, tail } = wave {
            let (lo, hi) = (x0 + head.min(*tail) * sim.time, x0 + head.max(*tail) * sim.time);
            fan_width += hi - lo;
            for (p, &x) in mesh.nodes().iter().enumerate() {
                if x > lo && x < hi {
                    let rho = (sim.field.component(0)[p] + sim.field.component(1)[p]).re();
                    fan_error += 0.5 * h * weights[p % np] * (rho - solution.sample_at(x, *x0, sim.time).0).abs();
                }
            }
        }
    }
    let rarefaction_l1 = (fan_width > 0.0 && jump > 0.0).then(|| fan_error / fan_width / jump);

    let (max_imag_rho, max_imag_rho_x) = if S::IS_COMPLEX {
        let (v, x) = sim.max_imag()?[0];
        (Some(v), Some(x))
    } else {
        (None, None)
    };
    Ok(RiemannDiagnostics {
        shock_estimate,
        shock_exact,
        shock_offset_cells: shock_exact.map(|s| (s - shock_estimate).abs() / h),
        rarefaction_l1,
        max_imag_rho,
        max_imag_rho_x,
        imag_peak_offset_cells: match (max_imag_rho_x, shock_exact) {
            (Some(x), Some(s)) => Some((x - s).abs() / h),
            _ => None,
        },
    })
}
