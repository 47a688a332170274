use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("bad token `{0}`: expected <id><t|h> with id >= 1")]
    BadToken(String),
    #[error("chord {0} has two {1} endpoints")]
    DuplicateRole(usize, &'static str),
    #[error("chord {0} appears only once")]
    Unpaired(usize),
    #[error("position {index} out of range (diagram has {len} endpoints)")]
    OutOfRange { index: usize, len: usize },
    #[error("move site is not valid on this diagram")]
    StaleSite,
    #[error("chord {0} has label sum 0")]
    ZeroChord(usize),
    #[error("quiver diagram is not reduced")]
    NotReduced,
    #[error("quiver diagram has an isolated chord")]
    IsolatedChord,
    #[error("diagram is not minimal")]
    NotMinimal,
    #[error("diagram has {chords} chords but truncation degree is {degree}")]
    TooManyChords { chords: usize, degree: usize },
    #[error("diagram has {0} chords; exact invariants are limited to {1}")]
    TooLarge(usize, usize),
    #[error("star tangle needs at least 3 branches, got {0}")]
    TooFewBranches(usize),
    #[error("branch directions {0} and {1} are parallel")]
    ParallelBranches(usize, usize),
    #[error("curve is not in general position: {0}")]
    Degenerate(String),
    #[error("coefficient {0} is not an integer and has no value mod 2")]
    NotIntegral(String),
    #[error("{0}")]
    Parse(String),
}

pub type Result<T, E = DiagramError> = std::result::Result<T, E>;
