//! The time loop shared by every driver.

use super::config::RunConfig;
use super::init::InitialData;
use crate::dg::{BoundaryCondition, DgMesh, KineticField};
use crate::error::{Error, Result};
use crate::flux::{Flux, FluxModel};
use crate::lattice::LatticeModel;
use crate::palindrome::{build_plan, Integrator, StageTimings, StepPlan};
use crate::reference::sample_field;
use crate::scalar::Scalar;

/// Discrete `L²` norm of the state after a step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSample {
    pub step: usize,
    pub time: f64,
    pub norm: f64,
}

/// Final state of a completed run.
#[derive(Debug, Clone)]
pub struct Simulation<S> {
    pub mesh: DgMesh,
    pub model: LatticeModel<FluxModel>,
    pub field: KineticField<S>,
    pub time: f64,
    /// Macro step; the last step may be shorter.
    pub dt: f64,
    pub steps: usize,
    pub history: Vec<NormSample>,
    pub timings: StageTimings,
    /// `λ` minus the largest wave speed of the initial data.
    pub subcharacteristic_margin: f64,
}

impl<S: Scalar> Simulation<S> {
    /// Primitive variables at every node, in mesh node order.
    pub fn primitives(&self) -> Result<Vec<Vec<S>>> {
        let m = self.model.m();
        let mut node = vec![S::zero(); 2 * m];
        let mut prim = vec![S::zero(); m];
        let mut out = Vec::with_capacity(self.mesh.nodes().len());
        for p in 0..self.mesh.nodes().len() {
            self.field.gather(p, &mut node);
            let (w, _) = self.model.moments(&node);
            self.model.flux.primitive(&w, &mut prim)?;
            out.push(prim.clone());
        }
        Ok(out)
    }

    /// Largest `|Im|` of each primitive variable and where it occurs.
    pub fn max_imag(&self) -> Result<Vec<(f64, f64)>> {
        let prims = self.primitives()?;
        let m = self.model.m();
        let mut best = vec![(0.0, self.mesh.a()); m];
        for (p, v) in prims.iter().enumerate() {
            for k in 0..m {
                let im = v[k].im().abs();
                if im > best[k].0 {
                    best[k] = (im, self.mesh.nodes()[p]);
                }
            }
        }
        Ok(best)
    }
}

/// Step sizes landing exactly on `t_max`: `n_full` steps of `dt`, then one
/// step of `last` if it is positive.
pub fn step_schedule(t_max: f64, dt: f64) -> (usize, f64) {
    if t_max <= 0.0 {
        return (0, 0.0);
    }
    let ratio = t_max / dt;
    let mut n = ratio.floor();
    // A remainder within round-off of a full step counts as a full step.
    if ratio - n > 1.0 - 1e-10 {
        n += 1.0;
    }
    let last = t_max - n * dt;
    if last.abs() <= 1e-12 * dt {
        (n as usize, 0.0)
    } else {
        (n as usize, last)
    }
}

/// Equilibrium `f^eq(w(x))` of the initial data at every node of `mesh`.
pub fn initial_field<S: Scalar>(
    mesh: &DgMesh,
    model: &LatticeModel<FluxModel>,
    data: &InitialData,
) -> Result<KineticField<S>> {
    let nv = model.n_velocities();
    let mut failure = None;
    let f = sample_field(mesh, nv, |cell, x| {
        let w: Vec<S> = data
            .state(x, mesh.cell_center(cell))
            .into_iter()
            .map(S::from_real)
            .collect();
        model.maxwellian(&w).unwrap_or_else(|e| {
            failure.get_or_insert(e);
            vec![S::zero(); nv]
        })
    })?;
    failure.map_or(Ok(f), Err)
}

/// Runs `cfg` to `t_max` in scalar type `S`.
pub fn simulate<S: Scalar>(cfg: &RunConfig) -> Result<Simulation<S>> {
    cfg.validate()?;
    if !S::IS_COMPLEX && cfg.scheme_kind()?.is_complex() {
        return Err(Error::Config(format!("scheme `{}` cannot run in real arithmetic", cfg.scheme.name)));
    }
    let model = cfg.lattice()?;
    let relaxation = cfg.relaxation_params()?;
    let data = InitialData::from_config(cfg)?;
    let mesh = DgMesh::new(cfg.mesh.a, cfg.mesh.b, cfg.mesh.n_cells, cfg.mesh.degree)?;

    let states: Vec<Vec<f64>> = mesh
        .nodes()
        .iter()
        .enumerate()
        .map(|(p, &x)| data.state(x, mesh.cell_center(p / mesh.n_nodes())))
        .collect();
    for w in &states {
        model.flux.check_admissible(w)?;
    }
    let margin = model.check_subcharacteristic(states.iter().map(|w| w.as_slice()))?;
    if margin <= 0.0 {
        return Err(Error::SubCharacteristic { margin });
    }

    let bc = BoundaryCondition {
        left: data.state(mesh.a(), mesh.b()),
        right: data.state(mesh.b(), mesh.a()),
    };
    let mut field = initial_field::<S>(&mesh, &model, &data)?;
    let dt = mesh.cfl_dt(cfg.scheme.beta, model.lambda());
    let scheme = cfg.scheme_kind()?.scheme();
    let base = cfg.scheme.base.into();
    let plan = build_plan(&scheme, dt, base, false);
    plan.check_collisions(&relaxation)?;
    let (n_full, last) = step_schedule(cfg.run.t_max, dt);
    let last_plan: Option<StepPlan> = (last > 0.0).then(|| build_plan(&scheme, last, base, false));
    if let Some(p) = &last_plan {
        p.check_collisions(&relaxation).map_err(|e| {
            Error::Config(format!(
                "final step dt = {last:.6e} chosen to land on t_max = {} hits a collision pole ({e}); adjust t_max or beta",
                cfg.run.t_max
            ))
        })?;
    }

    let mut integrator = Integrator::<S, _>::new(&mesh, model.clone(), &bc, relaxation)?;
    let norm0 = mesh.l2_norm(&field);
    let limit = cfg.run.halt_growth * norm0.max(f64::MIN_POSITIVE);
    let mut history = vec![NormSample {
        step: 0,
        time: 0.0,
        norm: norm0,
    }];
    let total = n_full + usize::from(last_plan.is_some());
    let mut time = 0.0;
    for step in 1..=total {
        let p = if step <= n_full { &plan } else { last_plan.as_ref().expect("last step") };
        integrator.step(&mut field, p)?;
        time = if step == total { cfg.run.t_max } else { step as f64 * dt };
        let norm = mesh.l2_norm(&field);
        history.push(NormSample { step, time, norm });
        if !norm.is_finite() || norm > limit {
            return Err(Error::Unstable { step, time, norm });
        }
    }
    Ok(Simulation {
        mesh,
        model,
        field,
        time,
        dt,
        steps: total,
        history,
        timings: integrator.timings(),
        subcharacteristic_margin: margin,
    })
}
