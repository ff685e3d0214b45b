use thiserror::Error;

pub type Result<T, E = Sd2Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Sd2Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("eigenvalue iteration did not converge for a {0}x{0} matrix")]
    EigenNoConvergence(usize),

    #[error("singular parameters in {what} at index {index}")]
    SingularParameter { what: &'static str, index: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("operator {op} cannot act on a {basis} state")]
    WrongBasis {
        op: &'static str,
        basis: &'static str,
    },

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("isotropic parameters (mu_x = mu_y within {tol:e}) are not supported here")]
    IsotropicDegenerate { tol: f64 },

    #[error("gauge entry {index} is zero")]
    ZeroGauge { index: usize },

    #[error("format error: {0}")]
    Format(String),
}
