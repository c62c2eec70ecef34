use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("element {0} is not join-irreducible")]
    NotJoinIrreducible(usize),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("lattice has {0} elements; at most {1} are supported")]
    TooLarge(usize, usize),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("identity `{name}` uses undeclared variable `{var}`")]
    UndeclaredVariable { name: String, var: String },
    #[error("size guard: {0}")]
    SizeGuard(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
