use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConnectivityError {
    #[error("corkscrew search failed: best candidate reached c = {best:.6}, need {c_min}")]
    NoCorkscrew { best: f64, c_min: f64 },

    #[error("corkscrew certification failed: {0}")]
    Certification(String),

    #[error("chain precondition violated: {0}")]
    ChainPrecondition(String),

    #[error("endpoints lie in different components of the decomposition")]
    Disconnected,

    #[error("point is not covered by the decomposition: {0}")]
    Uncovered(String),

    #[error("chain verification failed: {0}")]
    BadChain(String),

    #[error("geometry error: {0}")]
    Geometry(#[from] geom::GeomError),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, ConnectivityError>;
