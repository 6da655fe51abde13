use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid vertex name {0:?}: names must be nonempty and avoid whitespace, '^', '-' and '#'")]
    InvalidVertexName(String),
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("edge ({0}, {0}) joins a vertex to itself")]
    NonSimpleEdge(String),
    #[error("generator index {0} is not a vertex of the ambient graph")]
    UnknownGenerator(usize),
    #[error("bad word token {token:?}: {reason}")]
    BadToken { token: String, reason: String },
    #[error("vertex set must be nonempty")]
    EmptyVertexSet,
    #[error("operands live over different ambient graphs")]
    AmbientMismatch,
    #[error("missing image for generator {0:?}")]
    MissingImage(String),
    #[error("images do not preserve the relation [{u}, {v}]")]
    RelationViolated { u: String, v: String },
    #[error("supplied inverse does not invert the map at generator {0:?}")]
    InverseMismatch(String),
    #[error("generator #{index} is invalid: {reason}")]
    InvalidGenerator { index: usize, reason: String },
    #[error("mod-2 abelianization matrix is singular; the map is not an automorphism")]
    SingularMod2,
    #[error("multiplicative order of the mod-2 matrix exceeds {0}")]
    OrderExceeded(u64),
    #[error("image length exceeds the cap of {0} letters")]
    LengthCapExceeded(usize),
    #[error("automorphism diagram contains a directed cycle")]
    CyclePresent,
    #[error("complete/empty dichotomy violated on {{{}}}: {commuting:?} commute but {noncommuting:?} do not", vertices.join(", "))]
    Violation {
        vertices: Vec<String>,
        commuting: (String, String),
        noncommuting: (String, String),
    },
    #[error("{0:?} is not invariant under the automorphism")]
    NotInvariant(Vec<String>),
    #[error("orbit has {got} recorded lengths, at least {needed} are required")]
    OrbitTooShort { needed: usize, got: usize },
    #[error("{0}")]
    Spec(String),
    #[error("{context}: {source}")]
    InField { context: String, source: Box<Error> },
}

impl Error {
    pub fn in_field(self, context: impl Into<String>) -> Error {
        Error::InField {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, with field context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::InField { source, .. } => source.root(),
            other => other,
        }
    }
}
