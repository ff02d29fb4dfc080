use thiserror::Error;

use crate::scalar::Field;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("field mismatch: expected {expected}, found {found}")]
    Field { expected: Field, found: Field },

    /// A morphism triple failed one of its defining inclusions.
    #[error("morphism constraint violated: {inclusion} does not hold (residual {residual:.3e})")]
    Constraint {
        inclusion: &'static str,
        residual: f64,
    },

    #[error("cannot compose: codomain {codomain} differs from domain {domain}")]
    Composition { codomain: String, domain: String },

    #[error("order violation: {sub} is not contained in {sup}")]
    Order { sub: String, sup: String },

    #[error("hom-set mismatch: {0}")]
    HomSet(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("cone reconstruction failed: {0}")]
    Reconstruction(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
