//! Spectral perturbation analysis of lossy systems `A(beta) = Omega - i*beta*B`,
//! with `Omega` Hermitian and `B` positive semidefinite of rank `0 < N_B < N`.
//!
//! Everything is generic over the real scalar (`f32` or `f64`); the aliases
//! at the crate root fix it to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0)` style checks deliberately reject NaN

pub mod circuit;
pub mod error;
pub mod harmonic;
pub mod large_beta;
pub mod linalg;
pub mod scalar;
pub mod small_beta;
pub mod system;
pub mod tracker;

mod assignment;
mod refine;

#[cfg(test)]
mod test_support;

pub use error::{Error, Result};
pub use scalar::{inner, vnorm, ComplexMatrix, ComplexVector, Real};
pub use system::{
    canonicalize_mass, eigenvalue_quality, free_evolution_energy_audit, mode_metrics,
    orbit_subspace, BlockDecomposition, DissipativeSystem, ModeMetrics, Quality,
};
pub use large_beta::{
    degeneracy_report, high_loss_coefficients, large_beta_modes, low_loss_coefficients,
    DegeneracyDiagnostic, HighLossMode, LargeBetaAsymptote, LargeBetaMode, LowLossMode,
};
pub use small_beta::{small_beta_coefficients, SmallBetaMode};
pub use tracker::{
    check_spectral_symmetry, classify, critical_points_from_sweep, detect_overdamping,
    locate_critical_point, modal_eigenpairs, sweep, BranchClass, CriticalPoint, ModeRef,
    SpectralBranch, Sweep,
};
pub use harmonic::{
    admittance_exact, admittance_expansion, classify_frequency, loss_subspace_energy_bounds,
    respond, response_asymptote, response_limits, Admittance, AdmittanceExpansion, ForceRegime,
    FrequencyClass, InversionRoute, QualityLimit, ResponseAsymptote, ResponseLimits,
    ResponseReport,
};

/// Double-precision aliases.
pub type System = DissipativeSystem<f64>;
pub type Decomposition = BlockDecomposition<f64>;
pub type Matrix = ComplexMatrix<f64>;
pub type Vector = ComplexVector<f64>;
pub type Complex64 = num_complex::Complex<f64>;
pub type HighLoss = HighLossMode<f64>;
pub type LowLoss = LowLossMode<f64>;
pub type SmallBeta = SmallBetaMode<f64>;
pub type Branch = SpectralBranch<f64>;
pub type Circuit = circuit::CircuitSpec<f64>;
