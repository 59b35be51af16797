use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch for {what}: expected {expected}, got {got}")]
    Shape {
        what: String,
        expected: String,
        got: String,
    },

    #[error("matrix is not skew-symmetric: symmetric part has max entry {0:e}")]
    NotSkew(f64),

    #[error("{what} is not symmetric: max asymmetry {residual:e}")]
    NotSymmetric { what: String, residual: f64 },

    #[error("{what} carries an imaginary part of {max_imag:e}, above the tolerance {tol:e}")]
    NotReal {
        what: String,
        max_imag: f64,
        tol: f64,
    },

    #[error("oscillator count must be at least 1")]
    ZeroOscillators,

    #[error("Fock truncation of {0} levels is below the minimum of 4")]
    FockTooSmall(usize),

    #[error("dense operator dimension {dim} exceeds the limit of {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("Hamiltonian is not self-adjoint: residual {0:e}")]
    NotSelfAdjoint(f64),

    #[error("invalid input: {0}")]
    Input(String),
}

impl Error {
    pub(crate) fn shape(
        what: impl Into<String>,
        expected: (usize, usize),
        got: (usize, usize),
    ) -> Self {
        Error::Shape {
            what: what.into(),
            expected: format!("{}x{}", expected.0, expected.1),
            got: format!("{}x{}", got.0, got.1),
        }
    }
}
