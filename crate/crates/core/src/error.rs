use thiserror::Error;

/// Errors raised by the solver and its drivers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("singular flux: density component is zero")]
    SingularFlux,

    #[error("inadmissible state: {0}")]
    InadmissibleState(String),

    #[error("sub-characteristic condition violated: margin {margin:.6e} <= 0")]
    SubCharacteristic { margin: f64 },

    #[error(
        "singular collision at stage {stage}: |2 tau + dt| = {denominator:.3e} \
         (relative {relative:.3e}) with dt = {dt_re:+.6e}{dt_im:+.6e}i"
    )]
    SingularCollision {
        stage: usize,
        denominator: f64,
        relative: f64,
        dt_re: f64,
        dt_im: f64,
    },

    #[error("ill-conditioned local transport block (condition number {condition:.3e})")]
    SingularBlock { condition: f64 },

    #[error("unsupported polynomial degree {0} (expected 1..=8)")]
    UnsupportedDegree(usize),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("complex time step {0} requested in a real-valued run")]
    ComplexStepInRealRun(String),

    #[error("stage {stage} failed: {source}")]
    Stage {
        stage: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("unstable run: norm {norm:.3e} at step {step} (t = {time:.6e})")]
    Unstable { step: usize, time: f64, norm: f64 },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("undefined order: {0}")]
    UndefinedOrder(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Wraps `self` with the index of the stage that produced it.
    pub fn at_stage(self, stage: usize) -> Self {
        match self {
            Error::SingularCollision {
                denominator,
                relative,
                dt_re,
                dt_im,
                ..
            } => Error::SingularCollision {
                stage,
                denominator,
                relative,
                dt_re,
                dt_im,
            },
            Error::Stage { .. } => self,
            other => Error::Stage {
                stage,
                source: Box::new(other),
            },
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
