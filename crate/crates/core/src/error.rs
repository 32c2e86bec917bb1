use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("variable count mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("variable index {index} out of range for {n} variables")]
    BadIndex { index: usize, n: usize },

    #[error("remainder after dividing by {factor}")]
    NotDivisible { factor: String },

    #[error("input is not invariant under the Weyl group of type C_n")]
    NotSymmetric,

    #[error("eigenvalues of {mu:?} and {nu:?} coincide")]
    DegenerateEigenvalue { mu: Vec<usize>, nu: Vec<usize> },

    #[error("operator image has a component outside the lower order ideal of {mu:?}: {nu:?}")]
    NotTriangular { mu: Vec<usize>, nu: Vec<usize> },

    #[error("point is within {guard:e} of a pole ({what})")]
    PoleProximity { what: String, guard: f64 },

    #[error("quadrature did not converge after {nodes} nodes: last {last}, previous {previous}")]
    NoConvergence {
        nodes: usize,
        last: Complex64,
        previous: Complex64,
    },

    #[error("zero value for variable y_{0}")]
    ZeroVariable(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("division by zero")]
    DivisionByZero,
}
