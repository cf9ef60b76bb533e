use thiserror::Error;

/// Errors raised by the library. Numeric payloads are reported in `f64`
/// regardless of the scalar type used for the computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("NonFinite: matrix or vector contains NaN or infinite entries")]
    NonFinite,
    #[error("NotSquare: expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("NonHermitianInput: ||M - M*|| = {deviation:e} exceeds tolerance")]
    NonHermitianInput { deviation: f64 },
    #[error("NotPositiveDefinite: minimum eigenvalue {min_eigenvalue:e}")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("SingularBlock: leading block condition estimate {condition:e}")]
    SingularBlock { condition: f64 },
    #[error("SingularSchurComplement: condition estimate {condition:e}")]
    SingularSchurComplement { condition: f64 },
    #[error("InvalidSplit: split index {split} outside 1..{n}")]
    InvalidSplit { split: usize, n: usize },
    #[error("ConvergenceFailure: eigenvalue iteration did not converge")]
    ConvergenceFailure,

    #[error("NonHermitianOmega: ||Omega - Omega*|| = {deviation:e}")]
    NonHermitianOmega { deviation: f64 },
    #[error("BNotPSD: {0}")]
    BNotPsd(String),
    #[error("LossFractionViolated: loss rank N_B = {n_b} with N = {n}")]
    LossFractionViolated { n_b: usize, n: usize },
    #[error("RankDeficiencyAmbiguous: B has eigenvalue {eigenvalue:e} inside the rank guard band")]
    RankDeficiencyAmbiguous { eigenvalue: f64 },
    #[error("NotAnEigenpair: residual {residual:e} exceeds tolerance {tolerance:e}")]
    NotAnEigenpair { residual: f64, tolerance: f64 },
    #[error("NotDiagonalizable: eigenvector condition estimate {condition:e}")]
    NotDiagonalizable { condition: f64 },
    #[error("InvalidArgument: {0}")]
    InvalidArgument(String),

    #[error("EquivalenceViolated: mode {mode}: {detail}")]
    EquivalenceViolated { mode: usize, detail: String },
    #[error("ClassificationFailed: residual {residual:e} exceeds {limit:e}; extend the sweep to larger beta")]
    ClassificationFailed { residual: f64, limit: f64 },
    #[error("NoMergeInBracket: no eigenvalue merge onto the imaginary axis in [{lo}, {hi}]")]
    NoMergeInBracket { lo: f64, hi: f64 },

    #[error("ResonantFrequency: omega = {omega} is within {distance:e} of rho = {rho}")]
    ResonantFrequency { omega: f64, rho: f64, distance: f64 },
    #[error("InequalityViolated: {0}")]
    InequalityViolated(String),

    #[error("PhiOffDiagonalZero: |Phi_12| = {value:e}")]
    PhiOffDiagonalZero { value: f64 },
    #[error("InvalidCircuit: {0}")]
    InvalidCircuit(String),
}

impl Error {
    /// True for errors caused by invalid input rather than a numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::NonFinite
                | Error::NotSquare { .. }
                | Error::DimensionMismatch(_)
                | Error::NonHermitianInput { .. }
                | Error::NonHermitianOmega { .. }
                | Error::BNotPsd(_)
                | Error::LossFractionViolated { .. }
                | Error::RankDeficiencyAmbiguous { .. }
                | Error::InvalidArgument(_)
                | Error::InvalidSplit { .. }
                | Error::PhiOffDiagonalZero { .. }
                | Error::InvalidCircuit(_)
                | Error::NotPositiveDefinite { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
