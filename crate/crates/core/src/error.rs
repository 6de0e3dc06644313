use alloc::vec::Vec;

use crate::stein_weiss::Constraint;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Gamma evaluated at one of its poles {0, -1, -2, ...}.
    #[error("gamma function has a pole at x = {0}")]
    GammaPole(f64),

    #[error("{what} = {value} is outside its domain ({expected})")]
    Domain { what: &'static str, value: f64, expected: &'static str },

    /// Physical-space kernel requested where it is only a distribution.
    #[error("physical kernel needs 0 < Re lambda < 1, got Re lambda = {0}")]
    PhysicalKernelInvalid(f64),

    /// Evaluation paths are implemented only on the real line v = 0.
    #[error("analytic-family evaluation with v = {0} is not supported")]
    UnsupportedImaginaryOffset(f64),

    #[error("Stein-Weiss parameters inadmissible: {0:?}")]
    Inadmissible(Vec<Constraint>),

    /// Quadrature setup that cannot be built (too few nodes, bad range).
    #[error("invalid quadrature: {0}")]
    Quadrature(&'static str),

    #[error("degenerate configuration: {0}")]
    Degenerate(&'static str),
}

pub(crate) fn domain(what: &'static str, value: f64, expected: &'static str) -> Error {
    Error::Domain { what, value, expected }
}
