use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is rank deficient: {0}")]
    RankDeficient(String),
    #[error("matrix is not positive semi-definite (eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("pole of Gamma_{m}: alpha - {j}/2 = {value} is a non-positive integer")]
    Pole { m: usize, j: usize, value: f64 },
    #[error("parameter outside admissible domain: {0}")]
    Domain(String),
    #[error("order {alpha} not in the Wallach set W_{m}")]
    OrderNotInWallachSet { alpha: f64, m: usize },
    #[error("order {alpha} not admissible for the Riesz potential on {n}x{m} matrices")]
    OrderNotAdmissible { alpha: f64, n: usize, m: usize },
    #[error("integral diverges: {0}")]
    DivergentIntegral(String),
    #[error("integrand not integrable: {share:.2}% of draws non-finite")]
    NonFinite { share: f64 },
    #[error("empty integration domain: {0}")]
    EmptyDomain(String),
    #[error("existence condition violated: {0}")]
    ExistenceViolation(String),
    #[error("numeric branch unsupported for m = {m} (symbolic only)")]
    UnsupportedOrder { m: usize },
    #[error("numeric branch limited to {max} coordinates, got {got}")]
    UnsupportedDimension { max: usize, got: usize },
    #[error("odd order k = {0} unsupported (verified as constant identity only)")]
    OddOrderUnsupported(usize),
    #[error("pipeline has no closed form: {0}")]
    PipelineNotClosedForm(String),
    #[error("no registered check matches `{0}`")]
    NoSuchCheck(String),
    #[error("Monte Carlo acceptance rate {0:.4} below abort threshold")]
    LowAcceptance(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
