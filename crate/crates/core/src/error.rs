use thiserror::Error;

/// Errors raised by the semigroup, ideal, tensor, oracle and search layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("generator list is empty")]
    EmptyGenerators,

    #[error("generator {0} is not a positive integer")]
    InvalidGenerator(i64),

    #[error("generators have gcd {gcd} > 1; the semigroup is not numerical")]
    NotCoprime { gcd: i64 },

    #[error("genus {requested} exceeds the enumeration cap {cap}")]
    GenusCapExceeded { requested: usize, cap: usize },

    #[error("operands live over different semigroups: <{left}> vs <{right}>")]
    SemigroupMismatch { left: String, right: String },

    #[error("endomorphism ring of the maximal ideal is not additively closed: {a} + {b} missing")]
    NotARing { a: i64, b: i64 },

    #[error("the maximal ideal is principal (R is a discrete valuation ring, R = E = R-bar)")]
    PrincipalMaximalIdeal,

    #[error("ideal <{ideal}> is not closed under ring generator {ring_gen}")]
    NotClosedUnderRing { ideal: String, ring_gen: i64 },

    #[error("graded pieces failed to stabilize at degree {degree} (classes {classes}, in_product {in_product})")]
    StabilizationFailure {
        degree: i64,
        classes: usize,
        in_product: bool,
    },

    #[error("degree {degree}: fiber count {classes} disagrees with product membership {in_product}")]
    ProductMismatch {
        degree: i64,
        classes: usize,
        in_product: bool,
    },

    #[error("fiber at degree {degree} has {nodes} nodes, above the cap {cap}")]
    FiberTooLarge { degree: i64, nodes: usize, cap: usize },

    #[error("field modulus {0} is neither 0 nor an odd prime")]
    InvalidModulus(u64),

    #[error("unknown fiber engine `{0}`")]
    UnknownEngine(String),

    #[error("oracle disagreement: {0}")]
    OracleDisagreement(String),

    #[error("output `{path}` is not writable")]
    OutputUnwritable {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("resume file was written for config {found}, current config is {expected}")]
    ResumeMismatch { expected: String, found: String },

    #[error("resume state is inconsistent with the output: {0}")]
    CorruptResume(String),

    #[error("pullback lab check failed: {0}")]
    NotClosed(String),

    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
