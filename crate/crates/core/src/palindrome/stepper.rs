use std::time::{Duration, Instant};

use super::coefficients::CompositionScheme;
use super::plan::{build_plan, BaseMethod, StageKind, StepPlan};
use crate::dg::{BoundaryCondition, DgMesh, KineticField, Transport, TransportOrder};
use crate::error::{Error, Result};
use crate::flux::Flux;
use crate::lattice::LatticeModel;
use crate::relaxation::{collide_field, CollisionOrder, RelaxationParams};
use crate::scalar::Scalar;

/// Accumulated wall-clock time per stage kind.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StageTimings {
    pub transport: Duration,
    pub collide: Duration,
    pub transport_stages: usize,
    pub collide_stages: usize,
}

/// Applies step plans to a kinetic field.
#[derive(Debug)]
pub struct Integrator<S, F> {
    model: LatticeModel<F>,
    transport: Transport<S>,
    relaxation: RelaxationParams,
    timings: StageTimings,
}

impl<S: Scalar, F: Flux> Integrator<S, F> {
    pub fn new(mesh: &DgMesh, model: LatticeModel<F>, bc: &BoundaryCondition, relaxation: RelaxationParams) -> Result<Self> {
        let transport = Transport::new(mesh, &model, bc)?;
        Ok(Self {
            model,
            transport,
            relaxation,
            timings: StageTimings::default(),
        })
    }

    pub fn model(&self) -> &LatticeModel<F> {
        &self.model
    }

    pub fn relaxation(&self) -> &RelaxationParams {
        &self.relaxation
    }

    pub fn transport_mut(&mut self) -> &mut Transport<S> {
        &mut self.transport
    }

    pub fn timings(&self) -> StageTimings {
        self.timings
    }

    /// Runs every stage of `plan` on `f`.
    ///
    /// Transport stages with a negative real part go through the reversed
    /// velocity path. Errors carry the index of the failing stage.
    pub fn step(&mut self, f: &mut KineticField<S>, plan: &StepPlan) -> Result<()> {
        let (t_order, c_order) = match plan.base {
            BaseMethod::Lie => (TransportOrder::First, CollisionOrder::First),
            _ => (TransportOrder::Second, CollisionOrder::Second),
        };
        for (i, stage) in plan.stages.iter().enumerate() {
            let dt = S::from_complex(stage.dt)
                .ok_or_else(|| Error::ComplexStepInRealRun(format!("{}", stage.dt)).at_stage(i))?;
            let start = Instant::now();
            match stage.kind {
                StageKind::Transport => {
                    self.transport
                        .transport_signed_with(f, dt, t_order)
                        .map_err(|e| e.at_stage(i))?;
                    self.timings.transport += start.elapsed();
                    self.timings.transport_stages += 1;
                }
                StageKind::Collide => {
                    collide_field(f, dt, &self.relaxation, &self.model, c_order).map_err(|e| e.at_stage(i))?;
                    self.timings.collide += start.elapsed();
                    self.timings.collide_stages += 1;
                }
            }
        }
        Ok(())
    }

    /// One Strang step `T_2(dt/2) C_2(dt) T_2(dt/2)`.
    pub fn step_m2_strang(&mut self, f: &mut KineticField<S>, dt: f64) -> Result<()> {
        let plan = build_plan(&CompositionScheme::order2(), dt, BaseMethod::Strang, false);
        self.step(f, &plan)
    }

    /// One step of the asymptotic-preserving brick.
    pub fn step_m2(&mut self, f: &mut KineticField<S>, dt: f64) -> Result<()> {
        let plan = build_plan(&CompositionScheme::order2(), dt, BaseMethod::Symmetric, false);
        self.step(f, &plan)
    }
}
