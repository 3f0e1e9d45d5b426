use thiserror::Error;

/// Errors raised by the path loss models, the simulator and the fitter.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{quantity} must be {requirement}, got {value}")]
    Domain {
        quantity: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("{model}: distance {distance_m} m outside applicability span [{min_m}, {max_m}] m")]
    Applicability {
        model: &'static str,
        distance_m: f64,
        min_m: f64,
        max_m: f64,
    },

    #[error("degenerate fit: {0}")]
    DegenerateFit(&'static str),

    #[error("samples mix LOS and NLOS environments; fit each environment separately")]
    MixedEnvironments,

    #[error("no coverage: maximum path loss {max_pl_db} dB does not exceed the 1 m anchor {anchor_db} dB")]
    NoCoverage { max_pl_db: f64, anchor_db: f64 },

    #[error("invalid simulation config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(quantity: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain {
            quantity,
            requirement: "finite and positive",
            value,
        })
    }
}
