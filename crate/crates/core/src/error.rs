use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("moduli must be positive, got {0}")]
    InvalidModulus(String),

    #[error("a group needs at least one modulus")]
    EmptyModuli,

    #[error("moduli {0:?} do not form a divisibility chain")]
    NotDivisibilityChain(Vec<u64>),

    #[error("group order does not fit in 64 bits")]
    OrderOverflow,

    #[error("generator {0} is the identity")]
    ZeroGenerator(usize),

    #[error("generators {0} and {1} coincide")]
    DuplicateGenerator(usize, usize),

    #[error("the generators do not generate the group")]
    NotGenerating,

    #[error("group rank {rank} does not match degree {degree}")]
    RankMismatch { rank: usize, degree: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("integer {0} does not fit the target type")]
    Overflow(String),

    #[error("dilation factor must be at least 1")]
    InvalidDilation,

    #[error("degree {0} is not supported here")]
    UnsupportedDegree(u32),

    #[error("point set is not an L-shape: {0}")]
    NotLShape(String),

    #[error("generating set is not proper")]
    NotProper,

    #[error("matrix {0} is not a tessellation matrix of this digraph")]
    NotTessellation(String),

    #[error("minimum distance diagram construction exhausted")]
    ConstructionExhausted,

    #[error("expected a positive value")]
    NonPositive,

    #[error(
        "lower bound violated for proven degree {d}: order {n}, diameter {diameter} < bound {bound}"
    )]
    BoundViolated {
        d: u32,
        n: u64,
        diameter: u64,
        bound: i64,
    },

    #[error("conjectural density 21/250 refuted by {witness}: {detail}")]
    ConjectureRefuted { witness: String, detail: String },

    #[error("no degree-{d} generating set exists for order {n}")]
    NoGeneratingSet { d: u32, n: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("inconsistent cache for {key}: stored kappa {stored}, new kappa {new}")]
    InconsistentCache { key: String, stored: u64, new: u64 },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
