use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid number `{0}`")]
    InvalidNumber(String),
    #[error("line {line}: negative coefficient for species `{species}`")]
    NegativeCoefficient { line: usize, species: String },
    #[error("line {line}: duplicate reaction `{reaction}`")]
    DuplicateReaction { line: usize, reaction: String },
    #[error("line {line}: reactant and product are identical in `{reaction}`")]
    SelfLoop { line: usize, reaction: String },
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),
    #[error("species set does not belong to this network")]
    ForeignSpeciesSet,
    #[error("operation requires a non-empty species set")]
    EmptySet,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not strongly diffusive")]
    NotStronglyDiffusive,
    #[error("matrix is not diffusive")]
    NotDiffusive,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid pathway step {step}: {message}")]
    InvalidStep { step: usize, message: String },
    #[error("negative population at step {step}")]
    NegativePopulation { step: usize },
    #[error("integration failure: {0}")]
    Integration(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A proven implication failed to hold on a concrete input. Always a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::InvalidNumber(_)
                | Error::NegativeCoefficient { .. }
                | Error::DuplicateReaction { .. }
                | Error::SelfLoop { .. }
                | Error::UnknownSpecies(_)
        )
    }
}
