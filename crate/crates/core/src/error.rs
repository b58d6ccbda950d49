use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("quiver is not connected")]
    Disconnected,
    #[error("relation {0} is zero after collecting terms")]
    ZeroRelationDegenerate(usize),
    #[error("ideal is not admissible: paths of length {degree} survive at the degree cap")]
    NotAdmissible { degree: usize },
    #[error("vertex {vertex} out of range (algebra has {count} vertices)")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("vertex mismatch: {0}")]
    VertexMismatch(String),
    #[error("zero module")]
    ZeroModule,
    #[error("algebra is not self-injective: {0}")]
    NotSelfInjective(String),
    #[error("algebra is not weakly symmetric")]
    NotWeaklySymmetric,
    #[error("no symmetric form found by bounded search over the rationals")]
    Inconclusive,
    #[error("approximation verification failed: {0}")]
    ApproximationVerificationFailed(String),
    #[error("summands are not pairwise non-isomorphic: {0}")]
    NotBasic(String),
    #[error(
        "endomorphism ring of summand {summand} is not split local: {detail}; try a larger prime"
    )]
    NonSplitEndomorphism { summand: usize, detail: String },
    #[error("degree bound {bound} is below the Loewy length {needed}")]
    DegreeBoundTooSmall { bound: usize, needed: usize },
    #[error("no periodic closure: {0}")]
    NoneFound(String),
    #[error("Φ verification failed: {0}")]
    PhiVerificationFailed(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("generator metadata missing")]
    MetadataMissing,
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
