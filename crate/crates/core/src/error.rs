use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by an identically zero function")]
    DivisionByZero,

    /// Evaluation hit a vanishing denominator (a propagator, facet form or minor).
    #[error("pole: {0} vanishes at the evaluation point")]
    Pole(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate simplex (zero volume)")]
    DegenerateSimplex,

    #[error("polytope is unbounded")]
    Unbounded,

    #[error("polytope is not full-dimensional (affine dimension {found}, expected {expected})")]
    NotFullDimensional { expected: usize, found: usize },

    #[error("polytope is not simple at vertex {0}")]
    NotSimple(usize),

    /// The number of distinct verified critical points differs from (n-3)!.
    #[error("expected {expected} critical points, found {found}: {detail}")]
    WrongCount {
        expected: usize,
        found: usize,
        detail: String,
    },

    #[error("singular Hessian at a critical point")]
    SingularHessian,

    #[error("index clash in cross-ratio [{0}{1}|{2}{3}]")]
    IndexClash(usize, usize, usize, usize),

    #[error("degenerate line: the two spanning points are dependent")]
    DegenerateLine,

    #[error("non-generic configuration: {0}")]
    NonGeneric(String),

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),

    #[error("finite-difference stencil leaves the convergence region: {0}")]
    InsufficientMargin(String),

    #[error("word length {requested} exceeds truncation level {level}")]
    LevelOverflow { requested: usize, level: usize },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::WrongCount { .. }
                | Error::SingularHessian
                | Error::Divergent(_)
                | Error::QuadratureNonConvergence(_)
                | Error::NonGeneric(_)
        )
    }
}
