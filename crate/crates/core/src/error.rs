use thiserror::Error;

/// Errors raised anywhere in the model, analysis, or pipeline layers.
#[derive(Debug, Error)]
pub enum SailError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("discretization error: non-finite sweep slope at radius {radius}")]
    Discretization { radius: f64 },

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("euler-rate singularity: pitch {pitch} rad is within the gimbal-lock guard")]
    GimbalLock { pitch: f64 },

    #[error("actuation lost: G_z = {g_z:e} N/W (sail out of beam or inverted)")]
    ActuationLost { g_z: f64 },

    #[error("integration aborted at t = {time} s: {reason}")]
    Integration { time: f64, reason: String },

    #[error("simulation failed at t = {time} s: {cause}")]
    Simulation {
        time: f64,
        cause: Box<SailError>,
        partial: Box<crate::dynamics::Trajectory>,
    },

    #[error("ill-conditioned linearization: {0}")]
    IllConditioned(String),

    #[error("matrix is not Hurwitz (spectral abscissa {abscissa:e})")]
    NotHurwitz { abscissa: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("expansion quality: component {component} relative residual {residual:e} exceeds {tolerance:e}")]
    ExpansionQuality {
        component: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("sos assembly: {0}")]
    Assembly(String),

    #[error("config error in `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("sdpa parse error at line {line}: {reason}")]
    SdpaParse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, SailError>;

impl SailError {
    pub(crate) fn invalid(field: &str, reason: impl Into<String>) -> Self {
        SailError::InvalidParameter {
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn config(field: &str, reason: impl Into<String>) -> Self {
        SailError::Config {
            field: field.to_string(),
            reason: reason.into(),
        }
    }
}
