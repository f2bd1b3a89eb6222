use thiserror::Error;

/// Which side of a membership certificate failed to round to an exact proof.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertSide {
    Primal,
    Dual,
}

impl std::fmt::Display for CertSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CertSide::Primal => "decomposition",
            CertSide::Dual => "separation certificate",
        })
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("linear system has no solution")]
    NoSolution,
    #[error("cone is not full-dimensional and pointed")]
    DegenerateCone,
    #[error("invalid cone representation: {0}")]
    InvalidRepresentation(String),
    #[error("no generator lies on facet {0}")]
    EmptyFacet(usize),
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("no functional separates ray {0} from the remaining generators")]
    NoSeparatingFunctional(usize),
    #[error("no window of four consecutive extreme rays normalizes to the standard square")]
    NormalizationFailed,
    #[error("cone is a simplex cone; its two level-2 extensions coincide")]
    SimplexCone,
    #[error("cone is not a simplex cone")]
    NotSimplex,
    #[error("tuple is not in the polyhedral extension")]
    NotMember,
    #[error("could not round the numerical {0} to an exact proof")]
    CertificationFailed(CertSide),
    #[error("neither a non-simplex facet nor a non-simplex vertex figure was found")]
    FeatureSearchFailed,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("self-check failed: {0}")]
    Verification(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
