//! Time integration by palindromic composition of a symmetric second-order
//! splitting step.

mod coefficients;
mod plan;
mod stepper;

pub use coefficients::{triple_jump_complex, triple_jump_real, CompositionScheme, SchemeFamily, SchemeKind};
pub use plan::{build_plan, BaseMethod, Stage, StageKind, StepPlan};
pub use stepper::{Integrator, StageTimings};
