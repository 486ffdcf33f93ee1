use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("loop edge at `{0}`")]
    LoopEdge(String),
    #[error("repeated edge {0}-{1}")]
    RepeatedEdge(String, String),
    #[error("graphs with {0} vertices are not supported (limit 64)")]
    TooManyVertices(usize),
    #[error("vertex name `{0}` occurs in both factors")]
    NameCollision(String),
    #[error("copy count must be at least 1")]
    BadCopyCount,
    #[error("cannot parse word: {0}")]
    WordSyntax(String),
    #[error("exponent overflow")]
    Overflow,
    #[error("vertex set {0} is not a clique")]
    NotAClique(String),
    #[error("flats are not parallel")]
    NotParallel,
    #[error("{0} is not a point of {1}")]
    NotMember(String, String),
    #[error("graph is not the join of the given factors")]
    NotAJoin,
    #[error("not a graph automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("loop is not immersed in the complement graph: {0}")]
    NotImmersed(String),
    #[error("blow-up datum: {0}")]
    Datum(String),
    #[error("map is not flat-preserving at {0}")]
    NotFlatPreserving(String),
    #[error("not equivariant at {0}")]
    NotEquivariant(String),
    #[error("projection undefined: {0}")]
    Projection(String),
    #[error("labeled digraph: {0}")]
    Digraph(String),
    #[error("support {0} exceeds the bit depth")]
    SupportTooLarge(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
