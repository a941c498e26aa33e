use thiserror::Error;

#[derive(Debug, Error)]
pub enum WhitneyError {
    #[error("fattening parameter {0} outside (0, 0.1]")]
    Lambda(f64),
    #[error("cube {0} sits on the window rim and has no trusted region")]
    RimCube(u32),
    #[error("no Whitney cubes selected with C0 = {c0}, m0 = {m0}")]
    EmptyRegion { c0: f64, m0: i32 },
    #[error("chain construction failed: {0}")]
    Chain(String),
    #[error("{0}")]
    OutOfRange(String),
    #[error(transparent)]
    Geom(#[from] geom::GeomError),
    #[error(transparent)]
    Grid(#[from] grid::GridError),
}
