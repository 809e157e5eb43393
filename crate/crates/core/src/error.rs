use crate::space::SpaceKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("space mismatch: expected {expected:?}, found {found:?}")]
    SpaceMismatch { expected: SpaceKind, found: SpaceKind },

    #[error("domain error: {0}")]
    Domain(String),

    /// A binary word ran out of trusted coordinates.
    #[error("resolution exhausted: {0}")]
    Resolution(String),

    #[error("invalid map descriptor: {0}")]
    InvalidMap(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// A check was refused because its hypotheses do not hold.
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
