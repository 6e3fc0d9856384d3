use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible rings: {left} and {right}")]
    IncompatibleRings { left: String, right: String },
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("no square root of {value} in {ring}")]
    NoSquareRoot { value: String, ring: String },
    #[error("no primitive {order}-th root of unity in {ring}")]
    NoSuchRoot { order: u64, ring: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero assigned to {var}, which occurs with a negative exponent")]
    NonInvertibleValue { var: String },
    #[error("zero assigned to {var}")]
    ZeroAssigned { var: String },
    #[error("division is not exact")]
    InexactDivision,
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix entries are not constants")]
    NotScalar,
    #[error("coefficient {index} is zero")]
    ZeroCoefficient { index: usize },
    #[error("vectors {i} and {j} are not orthonormal")]
    NotOrthonormal { i: usize, j: usize },
    #[error("vectors {i} and {j} are not orthogonal")]
    NotOrthogonal { i: usize, j: usize },
    #[error("vector {index} is isotropic")]
    IsotropicVector { index: usize },
    #[error("matrix is not paraunitary")]
    NotParaunitary,
    #[error("matrix is not pseudo-paraunitary")]
    NotPseudoParaunitary,
    #[error("not a complete set: {0}")]
    NotCompleteSet(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("characteristic {characteristic} divides the group order {order}")]
    BadCharacteristic { characteristic: u64, order: usize },
    #[error("idempotent {index} is not fixed by the involution")]
    AsymmetricIdempotent { index: usize },
    #[error("coefficient {index} does not have unit modulus")]
    NotUnitModulus { index: usize },
    #[error("weight {index} is not a single nonzero term")]
    NotMonomial { index: usize },
    #[error("negative exponent in monomial {index}")]
    NegativeExponent { index: usize },
    #[error("matrix is not a symmetric rank-one idempotent")]
    NotRankOneIdempotent,
    #[error("vector is not a unit vector")]
    NotUnitVector,
    #[error("arrangement is not a Latin square: {0}")]
    NotLatinSquare(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("variable {var} already occurs in the input")]
    VariableCollision { var: String },
    #[error("variable {var} is not assigned")]
    NotFullyAssigned { var: String },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("pipeline error in step {step}: {message}")]
    Pipeline { step: usize, message: String },
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
