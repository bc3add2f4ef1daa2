use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("singular potential in {family}: {detail}")]
    SingularPotential { family: String, detail: String },
    #[error("transformation function is singular at r = {r}")]
    Singularity { r: f64 },
    #[error("inconsistent model {family}: {detail}")]
    Inconsistency { family: String, detail: String },
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("integration failed at r = {r}: {detail}")]
    Integration { r: f64, detail: String },
    #[error("matching system ill-conditioned at R = {radius} (condition {condition:.3e}); use a larger matching radius")]
    Matching { radius: f64, condition: f64 },
    #[error("scenario error: {0}")]
    Scenario(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Validation(_) => "validation",
            Error::Contract(_) => "contract",
            Error::SingularPotential { .. } => "singular_potential",
            Error::Singularity { .. } => "singularity",
            Error::Inconsistency { .. } => "inconsistency",
            Error::Constraint(_) => "constraint",
            Error::Integration { .. } => "integration",
            Error::Matching { .. } => "matching",
            Error::Scenario(_) => "scenario",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
