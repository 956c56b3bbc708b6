use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shadow has no crossings")]
    EmptyShadow,
    #[error("pairing is not a fixed-point-free involution at dart {0}")]
    NonInvolutivePairing(usize),
    #[error("malformed rotation system: {0}")]
    MalformedRotation(String),
    #[error("not embeddable in the sphere: traced {faces} faces, expected {expected}")]
    NotSphereEmbeddable { faces: usize, expected: usize },
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("label {label} appears {count} times, expected exactly twice")]
    LabelMultiplicity { label: i64, count: usize },
    #[error("crossing {index} out of range for a shadow with {crossings} crossings")]
    CrossingOutOfRange { index: usize, crossings: usize },
    #[error("expected a knot shadow, found {components} components")]
    NotKnotShadow { components: usize },
    #[error("shadow is not connected")]
    NotConnected,
    #[error("no alternating assignment: both passes of crossing {0} get the same role")]
    AlternationImpossible(usize),
    #[error("{what} exceeds the supported size {limit}")]
    TooLarge { what: &'static str, limit: usize },
    #[error("requested {requested} crossings, limit is {limit}")]
    LimitExceeded { requested: usize, limit: usize },
    #[error("shadow has no {0}")]
    FeatureAbsent(&'static str),
    #[error("trigon splice left {got} crossings, expected {expected}")]
    TrigonCountMismatch { expected: usize, got: usize },
    #[error("region transport failed: {0}")]
    TransportFailure(String),
}
