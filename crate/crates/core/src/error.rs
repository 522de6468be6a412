use thiserror::Error;

/// Errors raised by the numerical engines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("invalid radial grid: {0}")]
    InvalidGrid(String),
    #[error("ODE integration not converged: Richardson estimate {estimate:.3e} exceeds {tolerance:.3e} (refine the grid)")]
    NonConvergent { estimate: f64, tolerance: f64 },
    #[error("potential admits a two-body bound state (node of the zero-energy solution near r = {radius:.6})")]
    BoundState { radius: f64 },
    #[error("logarithm domain violated: 1 - 4 eta = {value:.6e} at |p| = {momentum:.6}")]
    Domain { momentum: f64, value: f64 },
    #[error("kappa = {0} outside [1/2, 2/3)")]
    KappaOutOfRange(f64),
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error("non-finite summand value at lattice point {point:?}")]
    NonFinite { point: [i64; 3] },
    #[error("invalid sum specification: {0}")]
    InvalidSum(String),
    #[error("truncation too small: tail estimate {estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    Truncation { estimate: f64, tolerance: f64 },
    #[error("aliasing control failed: Nyquist-shell ratio {ratio:.3e} exceeds {tolerance:.1e}; need grid size M >= {required}")]
    Aliasing {
        ratio: f64,
        tolerance: f64,
        required: usize,
    },
    #[error("grid size {0} is not a power of two")]
    GridSize(usize),
    #[error("fit window [{lo:.4e}, {hi:.4e}] contains fewer than {needed} profile points")]
    WindowEmpty { lo: f64, hi: f64, needed: usize },
    #[error("regression needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("Fock space dimension {dimension} exceeds budget {budget}")]
    DimensionBudget { dimension: usize, budget: usize },
    #[error("invalid mode list: {0}")]
    InvalidModes(String),
    #[error("exponential series did not converge after {terms} terms (cap too small for this generator)")]
    SeriesNonConvergent { terms: usize },
    #[error("cap leakage {leakage:.3e} exceeds threshold {threshold:.3e}")]
    Leakage { leakage: f64, threshold: f64 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

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
