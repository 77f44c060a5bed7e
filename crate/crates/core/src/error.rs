use thiserror::Error;

#[derive(Clone, Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("cell {cell:?} lies outside the lattice {n:?}")]
    CellOutOfRange { cell: [i64; 3], n: [usize; 3] },
    #[error("basis index {index} out of range (basis has {len} functions)")]
    BasisIndex { index: usize, len: usize },
    #[error("dimension mismatch: {0}")]
    Mismatch(String),
    #[error("jacobian along axis {0} is not symmetric; only symmetric hyperbolic systems are split")]
    NotDiagonalizable(usize),
    #[error("eigenvalue iteration did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("degenerate translation factors: {0}")]
    Degenerate(String),
    #[error("wave vector not commensurate with the periodic grid: {0}")]
    NotCommensurate(String),
    #[error("expression error at byte {pos}: {msg}")]
    Expr { pos: usize, msg: String },
    #[error("table {table}: {msg}")]
    Table { table: &'static str, msg: String },
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error("non-finite values at t = {0}")]
    Unstable(f64),
    #[error("invalid parameter: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
