//! Large-loss asymptotics. As `beta` grows the spectrum of `A(beta)` splits into
//! `N_B` high-loss modes, `zeta ~ -i zr beta + rho`, concentrated in `ran B`,
//! and `N - N_B` low-loss modes, `zeta ~ rho - i d / beta`, expelled from it.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::refine::refined_eigenpairs;
use crate::scalar::{cplx, vnorm, ComplexMatrix, ComplexVector, Real};
use crate::system::{BlockDecomposition, Quality};

/// Relative size below which a low-loss damping coefficient is set to zero.
pub const D_ZERO_TOL: f64 = 1e-12;

/// A mode whose damping grows linearly in `beta`.
#[derive(Debug, Clone)]
pub struct HighLossMode<T: Real> {
    /// Eigenvalue of `B` on `ran B` (the damping slope).
    pub zeta_ring: T,
    /// Limiting real part `(w, Omega w)`.
    pub rho: T,
    /// Unit vector in `ran B`.
    pub w_ring: ComplexVector<T>,
    pub degenerate_group: Option<usize>,
}

/// A mode whose damping decays like `1 / beta`.
#[derive(Debug, Clone)]
pub struct LowLossMode<T: Real> {
    /// Eigenvalue of `Omega` compressed to `ker B`.
    pub rho: T,
    /// Damping coefficient `(w, Theta^* B2^{-1} Theta w) >= 0`.
    pub d: T,
    /// Unit vector in `ker B`.
    pub w_ring: ComplexVector<T>,
    pub degenerate_group: Option<usize>,
}

/// Leading-order behaviour of a mode as `beta -> infinity`.
pub trait LargeBetaAsymptote<T: Real> {
    /// Asymptotic eigenvalue.
    fn eigenvalue(&self, beta: T) -> Complex<T>;
    /// Asymptotic quality factor.
    fn quality(&self, beta: T) -> Quality<T>;
    /// Asymptotic dissipated power of the unit-normalized mode.
    fn dissipation(&self, beta: T) -> T;
}

impl<T: Real> LargeBetaAsymptote<T> for HighLossMode<T> {
    fn eigenvalue(&self, beta: T) -> Complex<T> {
        cplx(self.rho, -self.zeta_ring * beta)
    }

    fn quality(&self, beta: T) -> Quality<T> {
        Quality::Finite(T::lit(0.5) * self.rho.abs() / (self.zeta_ring * beta))
    }

    fn dissipation(&self, beta: T) -> T {
        self.zeta_ring * beta
    }
}

impl<T: Real> LargeBetaAsymptote<T> for LowLossMode<T> {
    fn eigenvalue(&self, beta: T) -> Complex<T> {
        cplx(self.rho, -self.d / beta)
    }

    fn quality(&self, beta: T) -> Quality<T> {
        if self.d > T::zero() {
            Quality::Finite(T::lit(0.5) * self.rho.abs() / self.d * beta)
        } else {
            Quality::Infinite
        }
    }

    fn dissipation(&self, beta: T) -> T {
        self.d / beta
    }
}

/// Either kind of large-beta mode.
#[derive(Debug, Clone)]
pub enum LargeBetaMode<T: Real> {
    High(HighLossMode<T>),
    Low(LowLossMode<T>),
}

impl<T: Real> LargeBetaAsymptote<T> for LargeBetaMode<T> {
    fn eigenvalue(&self, beta: T) -> Complex<T> {
        match self {
            LargeBetaMode::High(m) => m.eigenvalue(beta),
            LargeBetaMode::Low(m) => m.eigenvalue(beta),
        }
    }

    fn quality(&self, beta: T) -> Quality<T> {
        match self {
            LargeBetaMode::High(m) => m.quality(beta),
            LargeBetaMode::Low(m) => m.quality(beta),
        }
    }

    fn dissipation(&self, beta: T) -> T {
        match self {
            LargeBetaMode::High(m) => m.dissipation(beta),
            LargeBetaMode::Low(m) => m.dissipation(beta),
        }
    }
}

/// High-loss coefficients, ordered by descending `zeta_ring`, ties by `rho`.
/// Repeated eigenvalues of `B2` are resolved by diagonalizing `Omega2` on the eigenspace.
pub fn high_loss_coefficients<T: Real>(decomp: &BlockDecomposition<T>) -> Vec<HighLossMode<T>> {
    let lift = decomp.loss_basis();
    let mut modes: Vec<HighLossMode<T>> = refined_eigenpairs(&decomp.b2, &decomp.omega2)
        .into_iter()
        .map(|p| HighLossMode {
            zeta_ring: p.value,
            rho: p.secondary,
            w_ring: &lift * p.vector,
            degenerate_group: p.group,
        })
        .collect();
    modes.sort_by(|a, b| {
        b.zeta_ring
            .partial_cmp(&a.zeta_ring)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.rho.partial_cmp(&b.rho).unwrap_or(std::cmp::Ordering::Equal))
    });
    relabel_groups(modes.iter_mut().map(|m| &mut m.degenerate_group));
    modes
}

/// Low-loss coefficients, ordered by ascending `rho`, ties by `d`.
/// Repeated eigenvalues of `Omega1` are resolved by diagonalizing `Theta^* B2^{-1} Theta`.
pub fn low_loss_coefficients<T: Real>(decomp: &BlockDecomposition<T>) -> Vec<LowLossMode<T>> {
    let lift = decomp.lossless_basis();
    let k = decomp.coupling_form();
    let floor = T::tol(D_ZERO_TOL) * k.norm();
    let mut modes: Vec<LowLossMode<T>> = refined_eigenpairs(&decomp.omega1, &k)
        .into_iter()
        .map(|p| LowLossMode {
            rho: p.value,
            d: if p.secondary <= floor { T::zero() } else { p.secondary },
            w_ring: &lift * p.vector,
            degenerate_group: p.group,
        })
        .collect();
    modes.sort_by(|a, b| {
        a.rho
            .partial_cmp(&b.rho)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.d.partial_cmp(&b.d).unwrap_or(std::cmp::Ordering::Equal))
    });
    relabel_groups(modes.iter_mut().map(|m| &mut m.degenerate_group));
    modes
}

/// Renumbers group labels in order of first appearance.
fn relabel_groups<'a>(groups: impl Iterator<Item = &'a mut Option<usize>>) {
    let mut seen: Vec<usize> = Vec::new();
    for g in groups {
        if let Some(old) = *g {
            let pos = match seen.iter().position(|&s| s == old) {
                Some(p) => p,
                None => {
                    seen.push(old);
                    seen.len() - 1
                }
            };
            *g = Some(pos);
        }
    }
}

/// Per-mode diagnostics relating `d = 0` to `w` being an eigenvector of `Omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyDiagnostic<T: Real> {
    /// `||(rho - Omega) w||`.
    pub eigen_residual: T,
    /// `w` is an eigenvector of `Omega` for `rho` (to tolerance).
    pub in_eigenspace: bool,
    /// `d` vanishes (to tolerance).
    pub d_is_zero: bool,
    /// `||Omega w||`.
    pub kernel_residual: T,
    /// `w` lies in `ker Omega` (to tolerance).
    pub in_kernel: bool,
    /// `rho != 0` or `d != 0`.
    pub rho_or_d_nonzero: bool,
}

/// Checks that `d_j = 0` exactly when `w_j` is an eigenvector of `Omega`, and
/// that `w_j` escapes `ker Omega` exactly when `rho_j` or `d_j` is nonzero.
///
/// Both statements are verified quantitatively: with `r = ||Theta w||`, one has
/// `r^2 / max zr <= d <= r^2 / min zr` and `||Omega w||^2 = rho^2 + r^2`.
pub fn degeneracy_report<T: Real>(
    decomp: &BlockDecomposition<T>,
    modes: &[LowLossMode<T>],
) -> Result<Vec<DegeneracyDiagnostic<T>>> {
    let (omega, _) = decomp.reassemble();
    let k = decomp.coupling_form();
    let zr: Vec<T> = crate::linalg::sym_eig(&decomp.b2).0;
    let zr_min = zr[0];
    let zr_max = zr[zr.len() - 1];
    let scale = omega.norm().max(T::one());
    let tol = T::tol(1e-10) * scale;
    let d_slack = T::tol(1e-10) * (T::one() + k.norm());
    let sq_slack = T::tol(1e-10) * scale * scale;

    let mut out = Vec::with_capacity(modes.len());
    for (j, m) in modes.iter().enumerate() {
        let ow = &omega * &m.w_ring;
        let res = vnorm(&(&m.w_ring * cplx(m.rho, T::zero()) - &ow));
        let kres = vnorm(&ow);
        let r2 = res * res;
        if m.d < r2 / zr_max - d_slack || m.d > r2 / zr_min + d_slack {
            return Err(Error::EquivalenceViolated {
                mode: j,
                detail: format!(
                    "d = {:e} outside [{:e}, {:e}] implied by ||(rho - Omega) w|| = {:e}",
                    m.d.as_f64(),
                    (r2 / zr_max).as_f64(),
                    (r2 / zr_min).as_f64(),
                    res.as_f64()
                ),
            });
        }
        if (kres * kres - (m.rho * m.rho + r2)).abs() > sq_slack {
            return Err(Error::EquivalenceViolated {
                mode: j,
                detail: format!(
                    "||Omega w||^2 = {:e} differs from rho^2 + ||Theta w||^2 = {:e}",
                    (kres * kres).as_f64(),
                    (m.rho * m.rho + r2).as_f64()
                ),
            });
        }
        let d_is_zero = m.d <= tol;
        out.push(DegeneracyDiagnostic {
            eigen_residual: res,
            in_eigenspace: res <= tol,
            d_is_zero,
            kernel_residual: kres,
            in_kernel: kres <= tol,
            rho_or_d_nonzero: m.rho.abs() > tol || !d_is_zero,
        });
    }
    Ok(out)
}

/// The high-loss and low-loss modes together, high-loss first.
pub fn large_beta_modes<T: Real>(decomp: &BlockDecomposition<T>) -> Vec<LargeBetaMode<T>> {
    high_loss_coefficients(decomp)
        .into_iter()
        .map(LargeBetaMode::High)
        .chain(low_loss_coefficients(decomp).into_iter().map(LargeBetaMode::Low))
        .collect()
}

/// Gram matrix of the mode vectors (identity for a complete orthonormal set).
pub fn mode_gram<T: Real>(high: &[HighLossMode<T>], low: &[LowLossMode<T>]) -> ComplexMatrix<T> {
    let vecs: Vec<&ComplexVector<T>> = high
        .iter()
        .map(|m| &m.w_ring)
        .chain(low.iter().map(|m| &m.w_ring))
        .collect();
    let n = vecs.len();
    ComplexMatrix::from_fn(n, n, |i, j| crate::scalar::inner(vecs[i], vecs[j]))
}
