use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector of length {0} cannot be reshaped into a square matrix")]
    NonSquareLength(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degenerate spectrum: gap {gap:.3e} below tolerance {tol:.3e}")]
    DegenerateSpectrum { gap: f64, tol: f64 },
    #[error("ambiguous branch matching at s = {s}")]
    BranchAmbiguity { s: f64 },
    #[error("generator has no zero mode")]
    NoZeroMode,
    #[error("generator has {0} zero modes, expected exactly one")]
    MultipleZeroModes(usize),
    #[error("coupling must be nonzero for the closed-form spectrum")]
    ZeroCoupling,
    #[error("system Hamiltonian is degenerate (Omega = {0:.3e})")]
    DegenerateHamiltonian(f64),
    #[error("parameter lies exactly on a classification boundary: {0}")]
    Boundary(String),
    #[error("state became non-finite or vanished before renormalization")]
    NonFiniteState,
    #[error("no convergence after {doublings} doublings (last change {last_change:.3e})")]
    NoConvergence { doublings: usize, last_change: f64 },
    #[error("exponential weight overflow")]
    Overflow,
    #[error("order {0} is not available for this model")]
    InvalidOrder(usize),
    #[error("closed-form fidelity requires gamma' > 0")]
    GammaPrimeZero,
    #[error("input state is not normalized (trace {0})")]
    UnnormalizedInput(f64),
    #[error("expected a {expected}-dimensional state, found {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("at s = {s}: {source}")]
    AtStep {
        s: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Attach the rescaled time at which a failure occurred.
    pub fn at(self, s: f64) -> Self {
        match self {
            Error::AtStep { .. } => self,
            other => Error::AtStep {
                s,
                source: Box::new(other),
            },
        }
    }

    /// The innermost error, with any `AtStep` wrappers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtStep { source, .. } => source.root(),
            other => other,
        }
    }
}
