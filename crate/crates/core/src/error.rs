use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty word")]
    Empty,
    #[error("column {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("column {pos}: unknown generator `{name}`")]
    UnknownGenerator { name: String, pos: usize },
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("in word literal: {0}")]
    Word(#[from] ParseError),
}

/// Precondition and hypothesis violations raised by the tower and by level
/// construction. Witnesses are word literals.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("cosets coincide: v·u⁻¹ = {quotient} lies in A")]
    EqualCosets { quotient: String },
    #[error("{v} lies in A")]
    InA { v: String },
    #[error("{v} lies in AtA: {v} = ({a})·t·({b})")]
    InAtA { v: String, a: String, b: String },
    #[error("{v} is not an involution: its square is {square}")]
    NotInvolution { v: String, square: String },
    #[error("free-product branch needs v⁻¹ ∉ AvA, but v⁻¹ = ({a})·({v})·({b})")]
    InverseInDoubleCoset { v: String, a: String, b: String },
    #[error("witness does not verify: {0}")]
    BadWitness(String),
    #[error("no levels have been built")]
    NoLevels,
}

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("cannot access session file: {0}")]
    Io(#[from] std::io::Error),
    #[error("unsupported session schema version {0}")]
    Version(u32),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("in session word: {0}")]
    Word(#[from] ParseError),
    #[error("replaying level: {0}")]
    Tower(#[from] TowerError),
    #[error("session does not replay: {0}")]
    Mismatch(String),
}
