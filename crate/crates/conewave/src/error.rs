use crate::fields::Domain;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] conewave_core::Error),
    #[error("expected a {expected:?} field, got {found:?}")]
    DomainMismatch { expected: Domain, found: Domain },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("dilation factor must be positive and finite, got {0}")]
    Dilation(f64),
    #[error("dilation by {delta} aliases: {leaked:e} of the energy falls outside the grid budget")]
    Aliasing { delta: f64, leaked: f64 },
    #[error("norm exponent must exceed 1, got {0}")]
    NormExponent(f64),
    #[error("test-function family is empty")]
    EmptyFamily,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("field file format: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
