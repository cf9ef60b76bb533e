//! Weak-loss asymptotics: for small `beta` each eigenvalue of `A(beta)` is
//! `omega_j - i sigma_j beta + O(beta^2)` with `omega_j, u_j` eigenpairs of
//! `Omega` and `sigma_j = (u_j, B u_j)`.

use num_complex::Complex;

use crate::refine::refined_eigenpairs;
use crate::scalar::{cplx, ComplexVector, Real};
use crate::system::{DissipativeSystem, Quality};

/// Relative size below which a damping rate is treated as zero.
pub const SIGMA_ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SmallBetaMode<T: Real> {
    /// Eigenfrequency of `Omega`.
    pub omega_j: T,
    /// First-order damping rate `(u, B u)`.
    pub sigma_j: T,
    /// Unit eigenvector of `Omega`.
    pub u_j: ComplexVector<T>,
    pub degenerate_group: Option<usize>,
    sigma_floor: T,
}

impl<T: Real> SmallBetaMode<T> {
    /// `omega_j - i sigma_j beta`.
    pub fn eigenvalue(&self, beta: T) -> Complex<T> {
        cplx(self.omega_j, -self.sigma_j * beta)
    }

    /// `|omega_j| / (2 sigma_j beta)`, infinite when `sigma_j` vanishes.
    pub fn quality(&self, beta: T) -> Quality<T> {
        if self.sigma_j > self.sigma_floor {
            Quality::Finite(T::lit(0.5) * self.omega_j.abs() / (self.sigma_j * beta))
        } else {
            Quality::Infinite
        }
    }

    /// Dissipated power `sigma_j beta` of the unit-normalized mode.
    pub fn dissipation(&self, beta: T) -> T {
        self.sigma_j * beta
    }
}

/// Small-beta coefficients ordered by ascending `omega_j`, ties by `sigma_j`.
/// Repeated eigenfrequencies are resolved by diagonalizing `B` on the eigenspace.
pub fn small_beta_coefficients<T: Real>(system: &DissipativeSystem<T>) -> Vec<SmallBetaMode<T>> {
    let floor = T::tol(SIGMA_ZERO_TOL) * system.b().norm();
    let mut modes: Vec<SmallBetaMode<T>> = refined_eigenpairs(system.omega(), system.b())
        .into_iter()
        .map(|p| SmallBetaMode {
            omega_j: p.value,
            sigma_j: if p.secondary.abs() <= floor { T::zero() } else { p.secondary },
            u_j: p.vector,
            degenerate_group: p.group,
            sigma_floor: floor,
        })
        .collect();
    modes.sort_by(|a, b| {
        a.omega_j
            .partial_cmp(&b.omega_j)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.sigma_j.partial_cmp(&b.sigma_j).unwrap_or(std::cmp::Ordering::Equal))
    });
    modes
}
