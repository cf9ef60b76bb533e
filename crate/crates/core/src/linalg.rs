//! Dense complex linear algebra: Hermitian and general eigendecompositions,
//! the Hermitian positive square root, and Schur-complement block inversion.
//!
//! Hermitian eigenproblems, SVD and LU come from nalgebra. The general
//! (non-normal) eigensolver is a complex Schur iteration written here: a
//! Householder reduction to Hessenberg form followed by single-shift QR sweeps
//! with Givens rotations, and eigenvectors by back-substitution on the
//! triangular factor.

use nalgebra::linalg::SymmetricEigen;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lex_cmp, modulus, real, ComplexMatrix, ComplexVector, Real};

/// Relative residual bound for a diagonalizable eigendecomposition.
pub const TOL_EIG: f64 = 1e-10;
/// Hermitian symmetry tolerance, relative to the Frobenius norm.
pub const TOL_HERMITIAN: f64 = 1e-12;
/// Eigenvector-matrix condition number above which a matrix is flagged near-defective.
pub const DIAGONALIZABLE_COND: f64 = 1e12;
/// Eigenvalues at or above `-TOL_PSD * ||M||` count as nonnegative.
pub const TOL_PSD: f64 = 1e-12;
/// Condition estimate above which a block is treated as singular.
pub const SINGULAR_COND: f64 = 1e12;

/// Eigenvalues and eigenvectors (as unit columns) of a square matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition<T: Real> {
    pub eigenvalues: ComplexVector<T>,
    pub eigenvectors: ComplexMatrix<T>,
    pub is_diagonalizable: bool,
    /// 2-norm condition number of the eigenvector matrix.
    pub condition_estimate: T,
}

impl<T: Real> EigenDecomposition<T> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Real parts of the eigenvalues (exact for Hermitian input).
    pub fn real_eigenvalues(&self) -> Vec<T> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }

    /// `||M V - V diag(lambda)||_F`.
    pub fn residual(&self, m: &ComplexMatrix<T>) -> T {
        let mut r = m * &self.eigenvectors;
        for (j, lam) in self.eigenvalues.iter().enumerate() {
            let mut col = r.column_mut(j);
            col -= self.eigenvectors.column(j) * *lam;
        }
        r.norm()
    }
}

pub(crate) fn ensure_square<T: Real>(m: &ComplexMatrix<T>) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub(crate) fn ensure_finite<T: Real>(m: &ComplexMatrix<T>) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// `||M - M^*||_F`.
pub fn hermitian_deviation<T: Real>(m: &ComplexMatrix<T>) -> T {
    (m - m.adjoint()).norm()
}

pub(crate) fn is_hermitian<T: Real>(m: &ComplexMatrix<T>) -> bool {
    hermitian_deviation(m) <= T::tol(TOL_HERMITIAN) * m.norm()
}

/// `(M + M^*) / 2`.
pub fn hermitian_part<T: Real>(m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    (m + m.adjoint()) * real(T::lit(0.5))
}

pub fn identity<T: Real>(n: usize) -> ComplexMatrix<T> {
    ComplexMatrix::identity(n, n)
}

/// Rotates a vector so its largest-modulus entry (first one on ties) is real and positive.
pub(crate) fn normalize_phase<T: Real>(mut v: ComplexVector<T>) -> ComplexVector<T> {
    let mut best = T::zero();
    for z in v.iter() {
        best = best.max(modulus(*z));
    }
    if best == T::zero() {
        return v;
    }
    let cutoff = best * (T::one() - T::lit(1e-8));
    if let Some(z) = v.iter().copied().find(|z| modulus(*z) >= cutoff) {
        let phase = z.conj() * real(T::one() / modulus(z));
        v *= phase;
    }
    v
}

fn normalize<T: Real>(mut v: ComplexVector<T>) -> ComplexVector<T> {
    let n = v.norm();
    if n > T::zero() {
        v *= real(T::one() / n);
    }
    v
}

/// 2-norm condition number (`inf` for singular input).
pub fn condition_number<T: Real>(m: &ComplexMatrix<T>) -> T {
    let sv = m.clone().singular_values();
    let mut hi = T::zero();
    let mut lo = T::lit(f64::INFINITY);
    for s in sv.iter() {
        hi = hi.max(*s);
        lo = lo.min(*s);
    }
    if lo <= T::zero() {
        T::lit(f64::INFINITY)
    } else {
        hi / lo
    }
}

/// Number of singular values above `rel_tol * sigma_max`.
pub fn numerical_rank<T: Real>(m: &ComplexMatrix<T>, rel_tol: T) -> usize {
    let sv = m.clone().singular_values();
    let top = sv.iter().fold(T::zero(), |a, s| a.max(*s));
    if top == T::zero() {
        return 0;
    }
    sv.iter().filter(|s| **s > rel_tol * top).count()
}

/// Inverse via LU with a condition-number guard.
pub fn direct_inverse<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    ensure_square(m)?;
    ensure_finite(m)?;
    let cond = condition_number(m);
    if !(cond < T::lit(SINGULAR_COND)) {
        return Err(Error::SingularBlock {
            condition: cond.as_f64(),
        });
    }
    m.clone().try_inverse().ok_or(Error::SingularBlock {
        condition: cond.as_f64(),
    })
}

/// Real ascending eigenvalues and phase-normalized orthonormal eigenvectors of a
/// matrix already known to be Hermitian.
pub(crate) fn sym_eig<T: Real>(m: &ComplexMatrix<T>) -> (Vec<T>, ComplexMatrix<T>) {
    let n = m.nrows();
    let se = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        se.eigenvalues[a]
            .partial_cmp(&se.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let vals = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vecs = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = normalize_phase(normalize(se.eigenvectors.column(src).into_owned()));
        vecs.set_column(dst, &col);
    }
    (vals, vecs)
}

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// orthonormal eigenvectors.
pub fn hermitian_eig<T: Real>(m: &ComplexMatrix<T>) -> Result<EigenDecomposition<T>> {
    ensure_square(m)?;
    ensure_finite(m)?;
    if !is_hermitian(m) {
        return Err(Error::NonHermitianInput {
            deviation: hermitian_deviation(m).as_f64(),
        });
    }
    let (vals, vecs) = sym_eig(m);
    Ok(EigenDecomposition {
        eigenvalues: ComplexVector::from_iterator(vals.len(), vals.into_iter().map(real)),
        eigenvectors: vecs,
        is_diagonalizable: true,
        condition_estimate: T::one(),
    })
}

/// Eigendecomposition of a general complex matrix. Eigenvalues are sorted by
/// real part, then imaginary part.
pub fn general_eig<T: Real>(m: &ComplexMatrix<T>) -> Result<EigenDecomposition<T>> {
    let n = ensure_square(m)?;
    ensure_finite(m)?;
    let (q, t, scale) = complex_schur(m)?;

    let mut pairs: Vec<(Complex<T>, ComplexVector<T>)> = Vec::with_capacity(n);
    let vecs = triangular_eigenvectors(&t);
    for k in 0..n {
        let v = normalize_phase(normalize(&q * vecs.column(k)));
        pairs.push((t[(k, k)] * real(scale), v));
    }
    pairs.sort_by(|a, b| lex_cmp(&a.0, &b.0));

    let eigenvalues = ComplexVector::from_iterator(n, pairs.iter().map(|p| p.0));
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (j, (_, v)) in pairs.iter().enumerate() {
        eigenvectors.set_column(j, v);
    }
    let condition_estimate = condition_number(&eigenvectors);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
        is_diagonalizable: condition_estimate <= T::lit(DIAGONALIZABLE_COND),
        condition_estimate,
    })
}

/// Eigenvalues only, sorted lexicographically.
pub fn eigenvalues<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<Complex<T>>> {
    ensure_square(m)?;
    ensure_finite(m)?;
    let (_, t, scale) = complex_schur(m)?;
    let mut vals: Vec<Complex<T>> = (0..t.nrows()).map(|k| t[(k, k)] * real(scale)).collect();
    vals.sort_by(lex_cmp);
    Ok(vals)
}

/// Givens rotation `G = [[c, s], [-conj(s), c]]` with real `c` such that
/// `G [x; y] = [r; 0]`.
fn givens<T: Real>(x: Complex<T>, y: Complex<T>) -> (T, Complex<T>) {
    let ay = modulus(y);
    if ay == T::zero() {
        return (T::one(), Complex::new(T::zero(), T::zero()));
    }
    let ax = modulus(x);
    if ax == T::zero() {
        return (T::zero(), y.conj() * real(T::one() / ay));
    }
    let big = ax.max(ay);
    let r = big * ((ax / big) * (ax / big) + (ay / big) * (ay / big)).sqrt();
    let c = ax / r;
    let s = (x * real(T::one() / ax)) * y.conj() * real(T::one() / r);
    (c, s)
}

fn wilkinson_shift<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Complex<T> {
    let half = (a - d) * real(T::lit(0.5));
    let bc = b * c;
    let disc = crate::scalar::csqrt(half * half + bc);
    let plus = half + disc;
    let minus = half - disc;
    let den = if modulus(plus) >= modulus(minus) { plus } else { minus };
    if modulus(den) == T::zero() {
        d
    } else {
        d - bc / den
    }
}

/// Complex Schur form `M = Q (scale * T) Q^*` with `T` upper triangular.
fn complex_schur<T: Real>(m: &ComplexMatrix<T>) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>, T)> {
    let n = m.nrows();
    let scale = m.iter().fold(T::zero(), |acc, z| acc.max(modulus(*z)));
    if scale == T::zero() {
        return Ok((identity(n), ComplexMatrix::zeros(n, n), T::one()));
    }
    let mut h = m * real(T::one() / scale);
    let mut q = identity::<T>(n);
    let two = real(T::lit(2.0));

    // Householder reduction to upper Hessenberg form.
    for k in 0..n.saturating_sub(2) {
        let x = h.view((k + 1, k), (n - k - 1, 1)).into_owned();
        let xnorm = x.norm();
        if xnorm == T::zero() {
            continue;
        }
        let x0 = x[(0, 0)];
        let phase = if modulus(x0) == T::zero() {
            real(T::one())
        } else {
            x0 * real(T::one() / modulus(x0))
        };
        let mut v = x.clone();
        v[(0, 0)] += phase * real(xnorm);
        let vnorm = v.norm();
        if vnorm == T::zero() {
            continue;
        }
        v *= real(T::one() / vnorm);
        let va = v.adjoint();
        // rows k+1.. : H <- (I - 2 v v^*) H
        {
            let mut block = h.view_mut((k + 1, 0), (n - k - 1, n));
            let w = &va * &block;
            block -= &v * w * two;
        }
        // columns k+1.. : H <- H (I - 2 v v^*)
        {
            let mut block = h.view_mut((0, k + 1), (n, n - k - 1));
            let w = &block * &v;
            block -= w * &va * two;
        }
        {
            let mut block = q.view_mut((0, k + 1), (n, n - k - 1));
            let w = &block * &v;
            block -= w * &va * two;
        }
        for i in (k + 2)..n {
            h[(i, k)] = real(T::zero());
        }
    }

    let eps = T::lit(T::EPS);
    let max_its = 30 * n.max(10);
    let mut ihi = n - 1;
    let mut its = 0usize;
    while ihi > 0 {
        let mut l = 0;
        let mut k = ihi;
        while k > 0 {
            let mut s = modulus(h[(k - 1, k - 1)]) + modulus(h[(k, k)]);
            if s == T::zero() {
                s = T::one();
            }
            if modulus(h[(k, k - 1)]) <= eps * s {
                h[(k, k - 1)] = real(T::zero());
                l = k;
                break;
            }
            k -= 1;
        }
        if l == ihi {
            ihi -= 1;
            its = 0;
            continue;
        }
        its += 1;
        if its > max_its {
            return Err(Error::ConvergenceFailure);
        }

        let shift = if its.is_multiple_of(10) {
            // exceptional shift to break cycles
            h[(ihi, ihi)] + real(T::lit(0.75) * h[(ihi, ihi - 1)].re.abs())
        } else {
            wilkinson_shift(
                h[(ihi - 1, ihi - 1)],
                h[(ihi - 1, ihi)],
                h[(ihi, ihi - 1)],
                h[(ihi, ihi)],
            )
        };

        let mut x = h[(l, l)] - shift;
        let mut y = h[(l + 1, l)];
        for k in l..ihi {
            if k > l {
                x = h[(k, k - 1)];
                y = h[(k + 1, k - 1)];
            }
            let (c, s) = givens(x, y);
            let cr = real(c);
            let col_start = if k > l { k - 1 } else { l };
            for j in col_start..n {
                let a = h[(k, j)];
                let b = h[(k + 1, j)];
                h[(k, j)] = cr * a + s * b;
                h[(k + 1, j)] = cr * b - s.conj() * a;
            }
            let row_end = (k + 2).min(ihi);
            for i in 0..=row_end {
                let a = h[(i, k)];
                let b = h[(i, k + 1)];
                h[(i, k)] = a * cr + b * s.conj();
                h[(i, k + 1)] = b * cr - a * s;
            }
            for i in 0..n {
                let a = q[(i, k)];
                let b = q[(i, k + 1)];
                q[(i, k)] = a * cr + b * s.conj();
                q[(i, k + 1)] = b * cr - a * s;
            }
            if k > l {
                h[(k + 1, k - 1)] = real(T::zero());
            }
        }
    }
    for j in 0..n {
        for i in (j + 1)..n {
            h[(i, j)] = real(T::zero());
        }
    }
    Ok((q, h, scale))
}

/// Eigenvectors of an upper-triangular matrix by back-substitution; column `k`
/// belongs to the eigenvalue `t[(k, k)]`.
fn triangular_eigenvectors<T: Real>(t: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let n = t.nrows();
    let tnorm = t.iter().fold(T::zero(), |acc, z| acc.max(modulus(*z)));
    let smin = T::lit(T::EPS) * tnorm.max(T::lit(f64::MIN_POSITIVE.sqrt()));
    let big = T::lit(1e30);
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let lam = t[(k, k)];
        let mut y = ComplexVector::<T>::zeros(n);
        y[k] = real(T::one());
        for i in (0..k).rev() {
            let mut sum = real(T::zero());
            for j in (i + 1)..=k {
                sum += t[(i, j)] * y[j];
            }
            let mut den = t[(i, i)] - lam;
            if modulus(den) < smin {
                den = real(smin);
            }
            y[i] = -sum / den;
            let m = modulus(y[i]);
            if m > big {
                let inv = real(T::one() / m);
                for j in i..=k {
                    y[j] *= inv;
                }
            }
        }
        out.set_column(k, &y);
    }
    out
}

/// Hermitian positive-definite square root.
///
/// 2x2 input uses the closed form `S = (sqrt(det M) I + M) / sqrt(tr M + 2 sqrt(det M))`;
/// larger input goes through the spectral decomposition.
pub fn positive_sqrt<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let n = ensure_square(m)?;
    ensure_finite(m)?;
    if !is_hermitian(m) {
        return Err(Error::NonHermitianInput {
            deviation: hermitian_deviation(m).as_f64(),
        });
    }
    let (vals, vecs) = sym_eig(m);
    let min = vals[0];
    if min <= T::tol(TOL_PSD) * m.norm() {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: min.as_f64(),
        });
    }
    let root = match n {
        1 => ComplexMatrix::from_element(1, 1, real(m[(0, 0)].re.sqrt())),
        2 => {
            let h = hermitian_part(m);
            let det = h[(0, 0)].re * h[(1, 1)].re - h[(0, 1)].norm_sqr();
            let sd = det.sqrt();
            let tr = h[(0, 0)].re + h[(1, 1)].re;
            let denom = (tr + sd + sd).sqrt();
            (h + identity::<T>(2) * real(sd)) * real(T::one() / denom)
        }
        _ => {
            let d = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
                n,
                vals.iter().map(|v| real(v.sqrt())),
            ));
            &vecs * d * vecs.adjoint()
        }
    };
    Ok(hermitian_part(&root))
}

/// Splits `M = [[P, Q], [R, S]]` with `P` the leading `k x k` block.
pub fn split_blocks<T: Real>(
    m: &ComplexMatrix<T>,
    k: usize,
) -> (ComplexMatrix<T>, ComplexMatrix<T>, ComplexMatrix<T>, ComplexMatrix<T>) {
    let n = m.nrows();
    (
        m.view((0, 0), (k, k)).into_owned(),
        m.view((0, k), (k, n - k)).into_owned(),
        m.view((k, 0), (n - k, k)).into_owned(),
        m.view((k, k), (n - k, n - k)).into_owned(),
    )
}

/// Inverse of the block form `[[P, Q], [R, S]]`.
pub fn join_blocks<T: Real>(
    p: &ComplexMatrix<T>,
    q: &ComplexMatrix<T>,
    r: &ComplexMatrix<T>,
    s: &ComplexMatrix<T>,
) -> ComplexMatrix<T> {
    let k = p.nrows();
    let n = k + s.nrows();
    let mut m = ComplexMatrix::zeros(n, n);
    m.view_mut((0, 0), (k, k)).copy_from(p);
    m.view_mut((0, k), (k, n - k)).copy_from(q);
    m.view_mut((k, 0), (n - k, k)).copy_from(r);
    m.view_mut((k, k), (n - k, n - k)).copy_from(s);
    m
}

fn check_split<T: Real>(m: &ComplexMatrix<T>, k: usize) -> Result<usize> {
    let n = ensure_square(m)?;
    ensure_finite(m)?;
    if k == 0 || k >= n {
        return Err(Error::InvalidSplit { split: k, n });
    }
    Ok(n)
}

fn invert_leading_block<T: Real>(p: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let cond = condition_number(p);
    if !(cond < T::lit(SINGULAR_COND)) {
        return Err(Error::SingularBlock {
            condition: cond.as_f64(),
        });
    }
    p.clone().try_inverse().ok_or(Error::SingularBlock {
        condition: cond.as_f64(),
    })
}

/// Schur complement `S - R P^{-1} Q` of the leading `k x k` block `P`.
pub fn schur_complement<T: Real>(m: &ComplexMatrix<T>, k: usize) -> Result<ComplexMatrix<T>> {
    check_split(m, k)?;
    let (p, q, r, s) = split_blocks(m, k);
    let p_inv = invert_leading_block(&p)?;
    Ok(s - r * (p_inv * q))
}

/// Inverse of `M` assembled from the Frobenius–Schur factorization
/// `M^{-1} = [[I, -P^{-1}Q], [0, I]] diag(P^{-1}, S_P^{-1}) [[I, 0], [-R P^{-1}, I]]`.
pub fn aitken_block_inverse<T: Real>(m: &ComplexMatrix<T>, k: usize) -> Result<ComplexMatrix<T>> {
    let n = check_split(m, k)?;
    let (p, q, r, s) = split_blocks(m, k);
    let p_inv = invert_leading_block(&p)?;
    let p_inv_q = &p_inv * &q;
    let r_p_inv = &r * &p_inv;
    let schur = s - &r * &p_inv_q;
    let cond = condition_number(&schur);
    if !(cond < T::lit(SINGULAR_COND)) {
        return Err(Error::SingularSchurComplement {
            condition: cond.as_f64(),
        });
    }
    let schur_inv = schur.try_inverse().ok_or(Error::SingularSchurComplement {
        condition: cond.as_f64(),
    })?;

    let m1 = k;
    let m2 = n - k;
    let zero12 = ComplexMatrix::<T>::zeros(m1, m2);
    let zero21 = ComplexMatrix::<T>::zeros(m2, m1);
    let upper = join_blocks(&identity(m1), &(-&p_inv_q), &zero21, &identity(m2));
    let middle = join_blocks(&p_inv, &zero12, &zero21, &schur_inv);
    let lower = join_blocks(&identity(m1), &zero12, &(-&r_p_inv), &identity(m2));
    Ok(upper * middle * lower)
}
