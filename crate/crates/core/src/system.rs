//! The dissipative system `(Omega, B)`, its block split along the loss subspace,
//! per-mode energy bookkeeping, mass rescaling, the orbit of `ran B`, and a
//! free-evolution energy-balance audit.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{
    ensure_finite, ensure_square, general_eig, hermitian_deviation, hermitian_part, identity,
    is_hermitian, numerical_rank, positive_sqrt, sym_eig, TOL_PSD,
};
use crate::scalar::{cexp, i_unit, inner, modulus, real, vnorm, ComplexMatrix, ComplexVector, Real};

/// Singular values of `B` above this fraction of `||B||` count toward the loss rank.
pub const RANK_TOL: f64 = 1e-10;
/// Eigenvalues of `B` inside `[lo, hi] * ||B||` make the rank decision ambiguous.
pub const RANK_GUARD_BAND: (f64, f64) = (1e-12, 1e-8);
/// Relative eigenpair residual accepted by [`mode_metrics`].
pub const EIGENPAIR_TOL: f64 = 1e-8;
/// `Q` is finite only when `-Im zeta` exceeds this fraction of `|zeta|`.
pub const TOL_Q: f64 = 1e-12;

/// A quality factor, possibly infinite (no dissipation).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quality<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> Quality<T> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Quality::Infinite)
    }

    pub fn value(&self) -> Option<T> {
        match self {
            Quality::Finite(q) => Some(*q),
            Quality::Infinite => None,
        }
    }

    /// `f64` view with `+inf` for the infinite case.
    pub fn to_f64(&self) -> f64 {
        match self {
            Quality::Finite(q) => q.as_f64(),
            Quality::Infinite => f64::INFINITY,
        }
    }
}

/// The pair `(Omega, B)`: Hermitian frequency operator and positive
/// semidefinite loss operator with `0 < rank B < N`.
#[derive(Debug, Clone)]
pub struct DissipativeSystem<T: Real> {
    omega: ComplexMatrix<T>,
    b: ComplexMatrix<T>,
    n_b: usize,
}

impl<T: Real> DissipativeSystem<T> {
    /// Validates `(Omega, B)` and computes the loss rank.
    pub fn new(omega: ComplexMatrix<T>, b: ComplexMatrix<T>) -> Result<Self> {
        let n = ensure_square(&omega)?;
        let nb_dim = ensure_square(&b)?;
        if n != nb_dim {
            return Err(Error::DimensionMismatch(format!(
                "Omega is {n}x{n} but B is {nb_dim}x{nb_dim}"
            )));
        }
        ensure_finite(&omega)?;
        ensure_finite(&b)?;
        if !is_hermitian(&omega) {
            return Err(Error::NonHermitianOmega {
                deviation: hermitian_deviation(&omega).as_f64(),
            });
        }
        if !is_hermitian(&b) {
            return Err(Error::BNotPsd(format!(
                "B is not Hermitian (||B - B*|| = {:e})",
                hermitian_deviation(&b).as_f64()
            )));
        }
        let omega = hermitian_part(&omega);
        let b = hermitian_part(&b);
        let (vals, _) = sym_eig(&b);
        let scale = vals.iter().fold(T::zero(), |a, v| a.max(v.abs()));
        if vals[0] < -T::tol(TOL_PSD) * scale {
            return Err(Error::BNotPsd(format!(
                "B has negative eigenvalue {:e}",
                vals[0].as_f64()
            )));
        }
        let n_b = numerical_rank(&b, T::lit(RANK_TOL));
        if n_b == 0 || n_b == n {
            return Err(Error::LossFractionViolated { n_b, n });
        }
        Ok(Self { omega, b, n_b })
    }

    pub fn omega(&self) -> &ComplexMatrix<T> {
        &self.omega
    }

    pub fn b(&self) -> &ComplexMatrix<T> {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.omega.nrows()
    }

    /// Loss rank `N_B = rank B`.
    pub fn n_b(&self) -> usize {
        self.n_b
    }

    /// Loss fraction `N_B / N`.
    pub fn loss_fraction(&self) -> T {
        T::lit(self.n_b as f64 / self.n() as f64)
    }

    /// `A(beta) = Omega - i beta B`.
    pub fn assemble(&self, beta: T) -> Result<ComplexMatrix<T>> {
        if !(beta >= T::zero()) || !beta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "beta must be finite and nonnegative, got {}",
                beta.as_f64()
            )));
        }
        Ok(&self.omega - &self.b * (i_unit::<T>() * real(beta)))
    }

    /// Orthogonal split `H = ran B (+) ker B` with blocks taken in the basis of
    /// eigenvectors of `B`, largest eigenvalue first.
    pub fn decompose(&self) -> Result<BlockDecomposition<T>> {
        let n = self.n();
        let k = self.n_b;
        let (vals, vecs) = sym_eig(&self.b);
        let scale = vals.iter().fold(T::zero(), |a, v| a.max(v.abs()));
        let (lo, hi) = RANK_GUARD_BAND;
        for v in &vals {
            let a = v.abs();
            if a >= T::lit(lo) * scale && a <= T::lit(hi) * scale {
                return Err(Error::RankDeficiencyAmbiguous {
                    eigenvalue: v.as_f64(),
                });
            }
        }
        let mut basis = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            basis.set_column(j, &vecs.column(n - 1 - j));
        }
        let om = basis.adjoint() * &self.omega * &basis;
        let bb = basis.adjoint() * &self.b * &basis;
        let u_loss = basis.columns(0, k).into_owned();
        let p_b = &u_loss * u_loss.adjoint();
        let p_b_perp = identity::<T>(n) - &p_b;
        let b2 = hermitian_part(&bb.view((0, 0), (k, k)).into_owned());
        let b2_inv = b2
            .clone()
            .try_inverse()
            .ok_or(Error::NotPositiveDefinite {
                min_eigenvalue: 0.0,
            })?;
        Ok(BlockDecomposition {
            omega2: hermitian_part(&om.view((0, 0), (k, k)).into_owned()),
            omega1: hermitian_part(&om.view((k, k), (n - k, n - k)).into_owned()),
            theta: om.view((0, k), (k, n - k)).into_owned(),
            b2_inv: hermitian_part(&b2_inv),
            b2,
            p_b,
            p_b_perp,
            basis,
        })
    }
}

/// Blocks of `Omega` and `B` relative to `H_B (+) H_B^perp`:
/// `Omega = [[omega2, theta], [theta^*, omega1]]`, `B = [[b2, 0], [0, 0]]`.
#[derive(Debug, Clone)]
pub struct BlockDecomposition<T: Real> {
    /// Unitary whose first `N_B` columns span `ran B`.
    pub basis: ComplexMatrix<T>,
    pub p_b: ComplexMatrix<T>,
    pub p_b_perp: ComplexMatrix<T>,
    pub omega2: ComplexMatrix<T>,
    pub omega1: ComplexMatrix<T>,
    pub theta: ComplexMatrix<T>,
    pub b2: ComplexMatrix<T>,
    pub b2_inv: ComplexMatrix<T>,
}

impl<T: Real> BlockDecomposition<T> {
    pub fn n(&self) -> usize {
        self.basis.nrows()
    }

    pub fn n_b(&self) -> usize {
        self.b2.nrows()
    }

    /// Columns of the basis spanning `H_B`.
    pub fn loss_basis(&self) -> ComplexMatrix<T> {
        self.basis.columns(0, self.n_b()).into_owned()
    }

    /// Columns of the basis spanning `H_B^perp = ker B`.
    pub fn lossless_basis(&self) -> ComplexMatrix<T> {
        let k = self.n_b();
        self.basis.columns(k, self.n() - k).into_owned()
    }

    /// `Theta^* B2^{-1} Theta`, the quadratic form behind the low-loss damping rates.
    pub fn coupling_form(&self) -> ComplexMatrix<T> {
        hermitian_part(&(self.theta.adjoint() * &self.b2_inv * &self.theta))
    }

    /// Block matrix `[[p, q], [r, s]]` (block coordinates) mapped to the ambient basis.
    pub fn to_ambient(&self, blocks: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        &self.basis * blocks * self.basis.adjoint()
    }

    /// Ambient matrix expressed in block coordinates.
    pub fn to_blocks(&self, m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        self.basis.adjoint() * m * &self.basis
    }

    /// Recovers `(Omega, B)` from the blocks.
    pub fn reassemble(&self) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
        let n = self.n();
        let k = self.n_b();
        let omega = crate::linalg::join_blocks(
            &self.omega2,
            &self.theta,
            &self.theta.adjoint(),
            &self.omega1,
        );
        let b = crate::linalg::join_blocks(
            &self.b2,
            &ComplexMatrix::zeros(k, n - k),
            &ComplexMatrix::zeros(n - k, k),
            &ComplexMatrix::zeros(n - k, n - k),
        );
        (self.to_ambient(&omega), self.to_ambient(&b))
    }
}

/// Energy, dissipated power and quality factor of an eigenmode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeMetrics<T: Real> {
    pub energy: T,
    pub dissipated_power: T,
    pub quality_factor: Quality<T>,
    pub eigenvalue: Complex<T>,
}

/// Quality factor `-|Re zeta| / (2 Im zeta)` of an eigenvalue, infinite when
/// the imaginary part is negligible.
pub fn eigenvalue_quality<T: Real>(zeta: Complex<T>) -> Quality<T> {
    if zeta.im < -T::tol(TOL_Q) * modulus(zeta) {
        Quality::Finite(-T::lit(0.5) * zeta.re.abs() / zeta.im)
    } else {
        Quality::Infinite
    }
}

/// Energy `U = (w,w)/2`, dissipated power `W = beta (w, B w)` and quality
/// factor of an eigenpair `(zeta, w)` of `A(beta)`.
pub fn mode_metrics<T: Real>(
    system: &DissipativeSystem<T>,
    beta: T,
    w: &ComplexVector<T>,
    zeta: Complex<T>,
) -> Result<ModeMetrics<T>> {
    let a = system.assemble(beta)?;
    if w.len() != system.n() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for a system of dimension {}",
            w.len(),
            system.n()
        )));
    }
    let wn = vnorm(w);
    if wn == T::zero() {
        return Err(Error::InvalidArgument("eigenvector must be nonzero".into()));
    }
    let scale = a.norm().max(T::lit(f64::MIN_POSITIVE));
    let tolerance = T::tol(EIGENPAIR_TOL) * scale * wn;
    let residual = vnorm(&(&a * w - w * zeta));
    if !(residual <= tolerance) {
        return Err(Error::NotAnEigenpair {
            residual: residual.as_f64(),
            tolerance: tolerance.as_f64(),
        });
    }
    let ww = wn * wn;
    let wbw = inner(w, &(system.b() * w)).re;
    let wow = inner(w, &(system.omega() * w)).re;
    let rayleigh_tol = T::tol(EIGENPAIR_TOL) * a.norm().max(T::one());
    let re_dev = (zeta.re - wow / ww).abs();
    let im_dev = (zeta.im + beta * wbw / ww).abs();
    if re_dev > rayleigh_tol || im_dev > rayleigh_tol {
        return Err(Error::NotAnEigenpair {
            residual: re_dev.max(im_dev).as_f64(),
            tolerance: rayleigh_tol.as_f64(),
        });
    }
    Ok(ModeMetrics {
        energy: T::lit(0.5) * ww,
        dissipated_power: (beta * wbw).max(T::zero()),
        quality_factor: eigenvalue_quality(zeta),
        eigenvalue: zeta,
    })
}

/// Removes a positive-definite mass from `m x'' + a x = 0`-type forms:
/// returns `m^{-1/2} a m^{-1/2}` and the transform `m^{1/2}`.
pub fn canonicalize_mass<T: Real>(
    m: &ComplexMatrix<T>,
    a: &ComplexMatrix<T>,
) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    let n = ensure_square(a)?;
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "mass is {}x{} but stiffness is {n}x{n}",
            m.nrows(),
            m.ncols()
        )));
    }
    ensure_finite(a)?;
    if !is_hermitian(a) {
        return Err(Error::NonHermitianInput {
            deviation: hermitian_deviation(a).as_f64(),
        });
    }
    let root = positive_sqrt(m)?;
    let inv = root
        .clone()
        .try_inverse()
        .ok_or(Error::NotPositiveDefinite { min_eigenvalue: 0.0 })?;
    let omega = hermitian_part(&(&inv * a * &inv));
    Ok((omega, root))
}

/// Smallest `Omega`-invariant subspace containing `ran B`: returns its
/// dimension and an orthonormal basis (as columns).
pub fn orbit_subspace<T: Real>(system: &DissipativeSystem<T>) -> (usize, ComplexMatrix<T>) {
    let n = system.n();
    let (vals, vecs) = sym_eig(system.b());
    let scale = vals.iter().fold(T::zero(), |a, v| a.max(v.abs()));
    let mut cols: Vec<ComplexVector<T>> = Vec::new();
    for j in (0..n).rev() {
        if vals[j] > T::lit(RANK_TOL) * scale {
            cols.push(vecs.column(j).into_owned());
        }
    }
    let mut frontier = cols.clone();
    for _ in 0..n {
        let mut added = Vec::new();
        for v in &frontier {
            let cand = system.omega() * v;
            let cn = vnorm(&cand);
            if cn == T::zero() {
                continue;
            }
            let mut r = cand;
            // modified Gram-Schmidt, applied twice
            for _ in 0..2 {
                for q in cols.iter().chain(added.iter()) {
                    let c = inner(q, &r);
                    r -= q * c;
                }
            }
            let rn = vnorm(&r);
            if rn > T::lit(RANK_TOL) * cn && cols.len() + added.len() < n {
                added.push(r * real(T::one() / rn));
            }
        }
        if added.is_empty() {
            break;
        }
        cols.extend(added.iter().cloned());
        frontier = added;
    }
    let dim = cols.len();
    let mut basis = ComplexMatrix::zeros(n, dim);
    for (j, c) in cols.iter().enumerate() {
        basis.set_column(j, c);
    }
    (dim, basis)
}

/// Finite-difference weights for the first derivative at `x0` on the given
/// nodes (Fornberg's recursion).
fn derivative_weights(x0: f64, nodes: &[f64]) -> Vec<f64> {
    let m = nodes.len();
    let mut c = vec![vec![0.0; 2]; m];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..m {
        let mn = i.min(1);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|row| row[1]).collect()
}

/// Propagates `v' = -i A(beta) v` from `v0` through the eigendecomposition and
/// returns `max |dU/dt + W| / max(1, |W|)` over interior grid points, with
/// `dU/dt` from centered finite differences.
pub fn free_evolution_energy_audit<T: Real>(
    system: &DissipativeSystem<T>,
    beta: T,
    v0: &ComplexVector<T>,
    t_grid: &[T],
) -> Result<T> {
    let a = system.assemble(beta)?;
    if v0.len() != system.n() {
        return Err(Error::DimensionMismatch(format!(
            "initial state of length {} for a system of dimension {}",
            v0.len(),
            system.n()
        )));
    }
    if t_grid.len() < 3 {
        return Err(Error::InvalidArgument("time grid needs at least 3 points".into()));
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("time grid must be strictly increasing".into()));
    }
    let eig = general_eig(&a)?;
    if !eig.is_diagonalizable {
        return Err(Error::NotDiagonalizable {
            condition: eig.condition_estimate.as_f64(),
        });
    }
    let coeffs = eig
        .eigenvectors
        .clone()
        .lu()
        .solve(v0)
        .ok_or(Error::NotDiagonalizable {
            condition: eig.condition_estimate.as_f64(),
        })?;
    let minus_i = -i_unit::<T>();
    let state = |t: T| -> ComplexVector<T> {
        let mut v = ComplexVector::zeros(system.n());
        for (k, z) in eig.eigenvalues.iter().enumerate() {
            let f = coeffs[k] * cexp(minus_i * *z * real(t));
            v += eig.eigenvectors.column(k) * f;
        }
        v
    };
    let mut energy = Vec::with_capacity(t_grid.len());
    let mut power = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let v = state(t);
        energy.push((T::lit(0.5) * inner(&v, &v).re).as_f64());
        power.push((beta * inner(&v, &(system.b() * &v)).re).as_f64());
    }
    let ts: Vec<f64> = t_grid.iter().map(|t| t.as_f64()).collect();
    let len = ts.len();
    let half = if len >= 5 { 2 } else { 1 };
    let mut worst = 0.0f64;
    for i in half..len - half {
        let nodes = &ts[i - half..=i + half];
        let w = derivative_weights(ts[i], nodes);
        let du: f64 = w
            .iter()
            .zip(&energy[i - half..=i + half])
            .map(|(a, b)| a * b)
            .sum();
        let r = (du + power[i]).abs() / power[i].abs().max(1.0);
        worst = worst.max(r);
    }
    Ok(T::lit(worst))
}
