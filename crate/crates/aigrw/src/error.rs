use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("literal refers to node {node} which does not exist or is dead")]
    DanglingLiteral { node: usize },

    #[error("expected {expected} input assignments, got {got}")]
    InputCountMismatch { expected: usize, got: usize },

    #[error("input patterns have inconsistent word counts")]
    RaggedPatterns,

    #[error("interface mismatch: {0}")]
    InterfaceMismatch(String),

    #[error("exhaustive equivalence limited to {max} inputs, graph has {inputs}")]
    TooManyInputs { inputs: usize, max: usize },

    #[error("cut leaves do not form a complete cut of node {root}")]
    IncompleteCut { root: usize },

    #[error("node {node} has {n_cuts} cuts, index {index} is out of range")]
    CutIndexOutOfRange {
        node: usize,
        index: usize,
        n_cuts: usize,
    },

    #[error("cut has {n_candidates} candidates, index {index} is out of range")]
    CandidateIndexOutOfRange { index: usize, n_candidates: usize },

    #[error("action list has {got} entries but the pass visits {expected} states")]
    ActionListTooShort { expected: usize, got: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("unsupported feature: {0}")]
    Unsupported(String),

    #[error("undefined signal `{0}`")]
    UndefinedSignal(String),

    #[error("rewritten graph is not equivalent to the original (method {0})")]
    EquivalenceFailure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
