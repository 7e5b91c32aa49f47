use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid group parameter: {0}")]
    InvalidGroup(String),

    #[error("label {label} does not belong to group {group}")]
    LabelMismatch { group: String, label: String },

    #[error("{group} does not have polynomial growth")]
    NotPolynomialGrowth { group: String },

    #[error("{group} has no classical (SU(2)/SO(3)) model for central elements")]
    NoClassicalModel { group: String },

    #[error("operation requires a group with integer-labelled irreducibles, got {group}")]
    NotNonNegIntLabelled { group: String },

    #[error("exponent {value} is outside the admissible range {range}")]
    InvalidExponent { value: f64, range: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("time parameter must be {requirement}, got {t}")]
    InvalidTime { t: f64, requirement: &'static str },

    #[error("scan grid rejected: {0}")]
    GridTooSmall(String),

    #[error("ball of radius {radius} in F_{rank} has {size} elements, above the limit {limit}")]
    BallTooLarge {
        rank: usize,
        radius: usize,
        size: u128,
        limit: u128,
    },

    #[error("support radius {support_radius} needs a truncation radius of at least {required}, got {radius}")]
    SupportTooWide {
        support_radius: usize,
        radius: usize,
        required: usize,
    },

    #[error("power iteration did not converge after {iterations} iterations (last {last}, previous {previous})")]
    NotConverged {
        iterations: usize,
        last: f64,
        previous: f64,
    },

    #[error("dense block of dimension {dim} exceeds the limit {limit}")]
    DenseTooLarge { dim: usize, limit: usize },

    #[error("block dimension {found} does not match n_alpha = {expected} for label {label}")]
    BlockDimension {
        label: String,
        expected: String,
        found: String,
    },

    #[error("interpolation parameters are inadmissible: {0}")]
    InadmissibleInterpolation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}
