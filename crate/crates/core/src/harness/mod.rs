//! Configuration-driven experiments: single runs, convergence studies and
//! the Riemann comparison, with CSV output.

mod config;
mod drivers;
mod init;
mod output;
mod report;
mod simulate;

pub use config::{
    BaseConfig, InitKind, MeshConfig, ModelConfig, OutputConfig, ReferenceKind, RelaxationConfig, RunConfig,
    RunSection, ScalarMode, SchemeConfig, StudyAxis, StudyConfig, OUTPUT_DIR_ENV,
};
pub use drivers::{
    converge, exact_error, reference_config, riemann_compare, riemann_diagnostics, run, study_configs,
    ExactSolution,
};
pub use init::{read_table, InitialData};
pub use output::{write_convergence, write_history, write_overlay, write_profile};
pub use report::{ConvergenceRow, ImagPeak, RiemannDiagnostics, RowOutcome, RunReport, Termination};
pub use simulate::{initial_field, simulate, step_schedule, NormSample, Simulation};
