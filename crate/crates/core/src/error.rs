use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid species `{name}`: {reason}")]
    InvalidSpecies { name: String, reason: String },

    #[error("invalid mode in entry {entry}: {reason}")]
    InvalidMode { entry: usize, reason: String },

    #[error("operands live on different lattices or species sets")]
    LatticeMismatch,

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error(
        "zero energy denominator at order {order}{}: {}",
        policy.map(|p| format!(" ({p} policy)")).unwrap_or_default(),
        signatures.join(", ")
    )]
    ZeroDenominator {
        policy: Option<&'static str>,
        order: usize,
        signatures: Vec<String>,
    },

    #[error("dressing order {got} is too low, need at least {needed}")]
    OrderTooLow { got: usize, needed: usize },

    #[error("Fock basis dimension {dimension} exceeds the limit {limit}")]
    DimensionLimit { dimension: usize, limit: usize },

    #[error("invalid cutoff: {0}")]
    InvalidCutoff(String),

    #[error("operator refers to mode {mode} outside the basis ({modes} modes)")]
    UnknownMode { mode: usize, modes: usize },

    #[error("eigensolver did not converge (residual {residual:e})")]
    NotConverged { residual: f64 },

    #[error("generator is not anti-Hermitian (deviation {deviation:e})")]
    NotAntiHermitian { deviation: f64 },

    #[error("matrix exponential is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("time {t} exceeds the evolution horizon {horizon}")]
    TimeHorizon { t: f64, horizon: f64 },

    #[error("vanishing perturbative denominator for intermediate state {state}")]
    DegenerateIntermediate { state: String },

    #[error("grid point x={x:?} y={y:?} tau={tau} is not spacelike (distance {distance})")]
    NotSpacelike {
        x: Vec<usize>,
        y: Vec<usize>,
        tau: f64,
        distance: f64,
    },

    #[error("{path}: {reason}")]
    Config { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            reason: reason.into(),
        }
    }
}
