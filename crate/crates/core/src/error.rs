//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by the model, the data pipeline, the estimators and the
/// policy solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SidurError {
    /// The detection term `u·x_I/x_T` is undefined because the testable
    /// population vanished while tests are being performed.
    #[error("testable population is {x_t} while u = {u} > 0 at t = {t}")]
    DegenerateDetection { t: f64, u: f64, x_t: f64 },

    /// A state component became NaN or infinite during integration.
    #[error("non-finite state at t = {t}")]
    NonFiniteState { t: f64 },

    /// `θ(0) = 1` leaves the Assumption-5 testable population empty.
    #[error("theta equals one with positive initial testing")]
    ThetaOne,

    /// Parameters or inputs outside their documented domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A CSV cell could not be parsed.
    #[error("parse error at row {row}, column '{column}': {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    /// The CSV header lacks mandatory columns, or the file is empty.
    #[error("schema error: {0}")]
    Schema(String),

    /// A series needed for an imputation interval is absent.
    #[error("missing series: {0}")]
    MissingSeries(String),

    /// The ρ regression has a zero denominator.
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// Least-squares regressors are collinear.
    #[error("rank-deficient regression: {0}")]
    RankDeficient(String),

    /// A requested time lies outside the simulated horizon.
    #[error("time {t} outside horizon [0, {horizon}]")]
    HorizonExceeded { t: f64, horizon: f64 },

    /// `x_I(ξ)` reached zero before the requested end of the ξ-grid.
    #[error("infected population vanishes at xi = {xi}")]
    ExtinctionReached { xi: f64 },

    /// The testing rate suppresses the epidemic at the origin (`R_C ≤ 1`).
    #[error("testing reproduction number R_C = {r_c} is not above one")]
    AssumptionViolated { r_c: f64 },

    /// Peak positions are not ordered around the stopping infection time.
    #[error("ill-defined peaks: {0}")]
    IllDefinedPeak(String),

    /// The stockpile is not exhausted before the epidemic dies out.
    #[error("stockpile of {r_max} tests outlasts the epidemic at C = {c}")]
    BudgetOutlastsEpidemic { r_max: f64, c: f64 },

    /// Newton's method did not meet its tolerance in the iteration budget.
    #[error("Newton iteration did not converge after {iterations} iterations")]
    NewtonDiverged { iterations: usize },

    /// Filesystem failure.
    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, SidurError>;
