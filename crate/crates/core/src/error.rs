use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("subspace is not contained in the ambient subspace")]
    NotContained,

    #[error("expected {expected} points, found {found}")]
    WrongPointCount { expected: usize, found: usize },

    #[error("polytope is not full-dimensional")]
    DegeneratePolytope,

    #[error("invalid triangulation: {}", .0.join("; "))]
    InvalidTriangulation(Vec<String>),

    #[error("fan: {0}")]
    Fan(String),

    #[error("unknown face {0}")]
    UnknownFace(String),

    #[error("{0} is not a boundary face of {1}")]
    NotBoundaryPair(String, String),

    #[error("cones are not nested")]
    ConesNotNested,

    #[error("{0} out of range")]
    OutOfRange(String),

    #[error("broken cosheaf: {0}")]
    BrokenCosheaf(String),

    #[error("ordinary homology requested on a non-compact complex; use Borel-Moore")]
    NonCompact,

    #[error("no sign given for point {0}")]
    MissingSign(usize),

    #[error("invalid real phase structure: {}", .0.join("; "))]
    InvalidPhase(Vec<String>),

    #[error("phase cross-check failed: {0}")]
    PhaseMismatch(String),

    #[error("operation requires a plane curve (n = 1, ambient lattice of rank 2)")]
    NotACurve,

    #[error("{0} is not a bounded edge of the curve")]
    NotABoundedEdge(String),

    #[error("twist set is not admissible")]
    InadmissibleTwists,

    #[error("{edges} bounded edges exceed the enumeration cap {cap}")]
    CapExceeded { edges: usize, cap: usize },

    #[error("twist rules disagree: {0}")]
    TwistDisagreement(String),

    #[error("vector does not lie in the expected subspace: {0}")]
    NotInSubspace(String),

    #[error("malformed face id {0:?}")]
    FaceIdSyntax(String),

    #[error("instance: {0}")]
    Instance(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
