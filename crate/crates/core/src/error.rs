use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("speed ({cx}, {cy}) with time step {k} does not land on the lattice of step {delta}")]
    NotLatticeCompatible { cx: f64, cy: f64, k: f64, delta: f64 },

    #[error("Maxwellian matrix {index} is not positive semi-definite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { index: usize, min_eigenvalue: f64 },

    #[error("shape mismatch: expected {expected} nodes, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("radius {r} lies outside the Hankel table range [0, {x_max}]")]
    DomainTruncation { r: f64, x_max: f64 },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("unknown preset `{0}` (expected one of optimal, cfl-half-a, cfl-half-b, cfl-half-c, d2q9)")]
    UnknownPreset(String),

    #[error("slope fit needs at least 2 valid rows, got {0}")]
    InsufficientRows(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Numeric(_) | Error::NotPsd { .. })
    }
}
