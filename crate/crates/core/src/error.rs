use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("subtyping budget of {0} visited pairs exceeded")]
    Budget(usize),
    #[error("model has {atoms} atoms, search bound is {bound}")]
    TooManyAtoms { atoms: usize, bound: usize },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("at offset {pos}: ω cannot label a test operator")]
    OmegaLabel { pos: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ReduceError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("sum of {0} operators exceeds the subset-enumeration guard of {1}")]
    SumTooLarge(usize, usize),
    #[error("no {rule} redex at {path}")]
    Replay { rule: String, path: String },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SemanticsError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error("term contains test constructs")]
    NotPure,
    #[error("environment does not cover free variable `{0}`")]
    Unbound(String),
    #[error("search budget exhausted")]
    Budget,
    #[error("invalid derivation: {0}")]
    InvalidDerivation(String),
}
