use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("invalid class definition: {0}")]
    InvalidClass(String),
    #[error("structure is not a member of {class}")]
    NotMember { class: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A precondition on the input class (FMM completeness, coefficient
    /// domain admissibility, oddness, AUT(m)) does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("class file: {0}")]
    ClassFile(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
