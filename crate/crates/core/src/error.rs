use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("invalid discrete jet: {0}")]
    InvalidJet(String),

    #[error("node index {index} out of range for mesh with {len} nodes")]
    NodeIndex { index: usize, len: usize },

    #[error("hat derivative requested at mesh node x = {x}")]
    DerivativeAtNode { x: f64 },

    #[error("fractional-linear map has a pole at x = {x} (|γx+δ| = {denom:e})")]
    Pole { x: f64, denom: f64 },

    #[error("group element is not admissible: {0}")]
    InvalidElement(String),

    #[error("group action folds the stencil ({0})")]
    StencilFolded(String),

    #[error("moving frame undefined: {0}")]
    DegenerateFrame(String),

    #[error("scheme requires strictly positive values, found u = {value} at offset {offset}")]
    NonPositive { value: f64, offset: i32 },

    #[error("scheme singular: {0}")]
    SingularScheme(String),

    #[error("Newton iteration did not converge after {iterations} iterations (last iterate {last})")]
    NewtonMaxIter { iterations: usize, last: f64 },

    #[error("Newton derivative vanished at iterate {last}")]
    NewtonZeroDerivative { last: f64 },

    #[error("zero pivot in tridiagonal solve at row {row}")]
    ZeroPivot { row: usize },

    #[error("mass matrix row {row} is not strictly diagonally dominant")]
    NotDiagonallyDominant { row: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("march failed at node {index}: {source}")]
    March {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("mesh tangling: x[{index}] >= x[{next}] after step", next = index + 1)]
    MeshTangling { index: usize },

    #[error("time step {step} (t = {t}) failed: {source}")]
    Step {
        step: usize,
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("convergence study failed at n = {n}: {source}")]
    Resolution {
        n: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("exact solution self-check failed for {name}: residual {residual:e} at x = {x}")]
    ExactSolutionCheck { name: String, residual: f64, x: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error in field `{field}`: {message}")]
    Config { field: String, message: String },
}

impl Error {
    /// True for errors caused by user input rather than by the numerics.
    pub fn is_config(&self) -> bool {
        match self {
            Error::Config { .. } | Error::InvalidArgument(_) | Error::InvalidMesh(_) => true,
            Error::Resolution { source, .. } => source.is_config(),
            _ => false,
        }
    }

    pub(crate) fn config(field: &str, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.to_string(),
            message: message.into(),
        }
    }
}
