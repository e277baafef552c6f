use thiserror::Error;

use crate::pricers::Moneyness;

/// Errors produced by the pricing library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the domain where the model or formula is defined.
    #[error("parameter domain violation: {0}")]
    Domain(String),

    /// Parameters sit exactly on a removable singularity of a closed form.
    #[error("singular parameters: {0}")]
    Singular(String),

    /// The option is on the wrong side of the money for the requested operation.
    #[error("{operation} requires {expected:?} option, got {actual:?}")]
    Classification {
        operation: &'static str,
        expected: Moneyness,
        actual: Moneyness,
    },

    /// No closed form exists for this model combination.
    #[error("unsupported model combination: {0}")]
    Unsupported(String),

    /// A numerical routine did not reach its accuracy target.
    #[error("{routine} failed: {message} (best estimate {estimate:e}, error bound {error:e})")]
    Numeric {
        routine: &'static str,
        message: String,
        estimate: f64,
        error: f64,
    },

    /// Invalid or unparsable configuration.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

/// Checks a named value is finite and fails with a domain error otherwise.
pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        domain(format!("{name} must be finite, got {value}"))
    }
}
