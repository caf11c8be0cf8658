use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bad group spec: {0}")]
    GroupSpec(String),
    #[error("inconsistent multiplication table: {0}")]
    Table(String),
    #[error("irrep construction failed: {0}")]
    Irrep(String),
    #[error("group mismatch")]
    GroupMismatch,
    #[error("non-integral fusion coefficient {value} for ({i},{i2};{j})")]
    Fusion { i: usize, i2: usize, j: usize, value: f64 },
    #[error("rank deficiency while solving intertwiners: {0}")]
    Rank(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("arity mismatch at {pos}: {msg}")]
    Arity { pos: usize, msg: String },
    #[error("coloring error: {0}")]
    Coloring(String),
    #[error("invalid fraction: {0}")]
    Fraction(String),
    #[error("not a knot: {0} components")]
    NotKnot(usize),
    #[error("invalid diagram: {0}")]
    Diagram(String),
    #[error("search space too large: {0} candidates")]
    SearchGuard(f64),
    #[error("numeric drift: {0}")]
    Drift(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
