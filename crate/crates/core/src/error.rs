use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("lowering transfers are not supported ({from_km} km -> {to_km} km)")]
    LoweringTransfer { from_km: f64, to_km: f64 },

    #[error("orbits are not co-planar in inclination ({from_deg} deg vs {to_deg} deg)")]
    InclinationMismatch { from_deg: f64, to_deg: f64 },

    #[error("relative RAAN drift between parking and constellation orbits is zero")]
    NoRelativeDrift,

    #[error("order quantity {quantity} exceeds launch capacity {capacity}")]
    CapacityExceeded { quantity: u32, capacity: u32 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("relative error undefined: simulated value of `{metric}` is zero")]
    ZeroReference { metric: &'static str },

    #[error("at least two launch dates are required, got {0}")]
    InsufficientData(usize),

    #[error("launch dates are not sorted at position {0}")]
    UnsortedDates(usize),

    #[error("could not parse `{0}` as an ISO-8601 date")]
    DateParse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
