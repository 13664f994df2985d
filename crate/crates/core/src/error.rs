use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must lie in {range}, got {value}")]
    InvalidProbability {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("no Pauli channel with p_Y = 0 realizes e_Z = {e_z}, e_X = {e_x} (sum exceeds 1)")]
    InfeasibleChannel { e_z: f64, e_x: f64 },

    #[error("Pauli probabilities sum to {0}, expected 1")]
    UnnormalizedChannel(f64),

    #[error("invalid session config: {0}")]
    InvalidConfig(String),

    #[error(
        "expected {expected:.1} check samples in group `{group}`, below the minimum of {minimum}; \
         raise num_rounds or check_fraction, or set allow_low_statistics"
    )]
    InsufficientChecks {
        group: &'static str,
        expected: f64,
        minimum: f64,
    },

    #[error("intercept strategy `use-preannounced` needs an announced basis, but none was given")]
    MissingAnnouncement,
}

pub type Result<T> = std::result::Result<T, Error>;

/// Checks `value` is a probability in the closed interval [0, 1].
pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::InvalidProbability {
            name,
            value,
            range: "[0, 1]",
        })
    }
}

/// Checks `value` lies in the open interval (0, 1).
pub(crate) fn check_open_unit(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(Error::InvalidProbability {
            name,
            value,
            range: "(0, 1)",
        })
    }
}
