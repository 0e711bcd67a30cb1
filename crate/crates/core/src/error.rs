use thiserror::Error;

/// Errors shared across the solver and diagnostics layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {constraint}")]
    InvalidParameter { name: String, constraint: String },

    #[error("fields live on different grids ({left} vs {right})")]
    GridMismatch { left: String, right: String },

    #[error("negative density {value:.6e} at collocation index {index} (t = {time:.6})")]
    NegativeDensity { index: usize, value: f64, time: f64 },

    #[error("density-weighted mass system is near singular (condition estimate {cond:.3e})")]
    SingularMass { cond: f64 },

    #[error("velocity recovery did not converge within {iters} iterations (residual {residual:.3e})")]
    SolveDiverged { iters: usize, residual: f64 },

    #[error("time step underflow at t = {time:.6}: min density {min_rho:.6e} after {halvings} halvings")]
    StepFailed { time: f64, min_rho: f64, halvings: u32 },

    #[error("requested window [{lo}, {hi}] is not covered by the record [{rec_lo}, {rec_hi}]")]
    WindowOutOfRange { lo: f64, hi: f64, rec_lo: f64, rec_hi: f64 },

    #[error("zero field where a nonzero field is required")]
    ZeroField,

    #[error("empirical law `{name}` has no samples")]
    EmptyLaw { name: String },

    #[error("ensemble coverage violation: {0}")]
    Coverage(String),

    #[error("snapshot decode failed: {0}")]
    SnapshotFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(name: &str, constraint: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.to_string(),
            constraint: constraint.into(),
        }
    }
}
