use thiserror::Error;

/// Errors raised by the numeric routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of {function} at s = {re}{im:+}i")]
    Pole { function: &'static str, re: f64, im: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("quadrature failed: estimated error {estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    Quadrature { estimate: f64, tolerance: f64 },
    #[error("series truncation: certified tail bound {bound:.3e} exceeds {limit:.3e}")]
    Truncation { bound: f64, limit: f64 },
    #[error("phase tracking of log xi failed at node {node}: jump of {jump:.3} rad")]
    BranchTracking { node: usize, jump: f64 },
    #[error("contour result has imaginary residue {0:.3e}")]
    ImaginaryResidue(f64),
    #[error("root finding failed: {0}")]
    RootFinding(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
