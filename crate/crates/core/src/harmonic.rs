//! Response to a harmonic force `f e^{-i omega t}`: the admittance
//! `Y(omega) = i [omega I - A(beta)]^{-1}`, its large-beta expansion
//! `Y = diag(0, i Xi1^{-1}) + W_{-1} / beta + O(beta^-2)`, and the stored
//! energy, dissipated power and quality factor of the stationary response.
//!
//! Block notation (in the basis of the loss split):
//! `Xi1 = omega I - Omega1`, `Xi2 = omega I - Omega2 + i beta B2`.

use crate::error::{Error, Result};
use crate::large_beta::{low_loss_coefficients, LowLossMode};
use crate::linalg::{
    aitken_block_inverse, condition_number, direct_inverse, hermitian_part, identity, join_blocks,
};
use crate::scalar::{i_unit, inner, real, vnorm, ComplexMatrix, ComplexVector, Real};
use crate::system::{BlockDecomposition, DissipativeSystem, Quality};

/// Relative threshold for `||P_B^perp f||` below which `f` lies in `ran B`.
pub const LOSS_SUBSPACE_TOL: f64 = 1e-12;
/// Base of the resonance tolerance `1e-8 (1 + spread of rho)`.
pub const RESONANCE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyClass<T> {
    pub omega: T,
    pub resonant: bool,
    pub nearest_rho: T,
    pub distance: T,
}

/// Resonant means `omega` coincides (to tolerance) with a low-loss limit frequency.
pub fn classify_frequency<T: Real>(omega: T, low: &[LowLossMode<T>]) -> FrequencyClass<T> {
    let mut lo = T::lit(f64::INFINITY);
    let mut hi = T::lit(f64::NEG_INFINITY);
    let mut nearest = T::zero();
    let mut distance = T::lit(f64::INFINITY);
    for m in low {
        lo = lo.min(m.rho);
        hi = hi.max(m.rho);
        let d = (omega - m.rho).abs();
        if d < distance {
            distance = d;
            nearest = m.rho;
        }
    }
    let spread = if low.is_empty() { T::zero() } else { hi - lo };
    let tol = T::tol(RESONANCE_TOL) * (T::one() + spread);
    FrequencyClass {
        omega,
        resonant: distance <= tol,
        nearest_rho: nearest,
        distance,
    }
}

fn ensure_nonresonant<T: Real>(omega: T, low: &[LowLossMode<T>]) -> Result<()> {
    let fc = classify_frequency(omega, low);
    if fc.resonant {
        return Err(Error::ResonantFrequency {
            omega: omega.as_f64(),
            rho: fc.nearest_rho.as_f64(),
            distance: fc.distance.as_f64(),
        });
    }
    Ok(())
}

/// Which inversion produced an admittance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InversionRoute {
    /// Block factorization through the Schur complement of the loss block.
    Schur,
    /// Plain LU inversion (the loss block or its complement was ill-conditioned).
    Direct,
}

#[derive(Debug, Clone)]
pub struct Admittance<T: Real> {
    pub matrix: ComplexMatrix<T>,
    pub route: InversionRoute,
    /// Condition estimate of `omega I - A(beta)`.
    pub condition: T,
}

/// `i [omega I - A(beta)]^{-1}`, assembled by block inversion in the loss basis.
pub fn admittance_exact<T: Real>(
    system: &DissipativeSystem<T>,
    omega: T,
    beta: T,
) -> Result<Admittance<T>> {
    if !(beta > T::zero()) || !beta.is_finite() || !omega.is_finite() {
        return Err(Error::InvalidArgument(
            "admittance needs finite omega and beta > 0".into(),
        ));
    }
    let decomp = system.decompose()?;
    ensure_nonresonant(omega, &low_loss_coefficients(&decomp))?;
    let n = system.n();
    let shifted = identity::<T>(n) * real(omega) - system.assemble(beta)?;
    let blocks = decomp.to_blocks(&shifted);
    let (inv, route) = match aitken_block_inverse(&blocks, decomp.n_b()) {
        Ok(inv) => (inv, InversionRoute::Schur),
        Err(Error::SingularBlock { .. }) | Err(Error::SingularSchurComplement { .. }) => {
            (direct_inverse(&blocks)?, InversionRoute::Direct)
        }
        Err(e) => return Err(e),
    };
    Ok(Admittance {
        matrix: decomp.to_ambient(&inv) * i_unit::<T>(),
        route,
        condition: condition_number(&shifted),
    })
}

/// Leading terms of the admittance as `beta -> infinity`.
#[derive(Debug, Clone)]
pub struct AdmittanceExpansion<T: Real> {
    /// `diag(0, i Xi1^{-1})` in ambient coordinates.
    pub leading: ComplexMatrix<T>,
    /// Coefficient of `1/beta`; Hermitian positive semidefinite of rank `N_B`.
    pub w_minus1: ComplexMatrix<T>,
    /// Unit columns spanning `ker W_{-1}`: lossless part `e`, loss part `-Theta Xi1^{-1} e`.
    pub kernel_basis: ComplexMatrix<T>,
}

fn xi1_inverse<T: Real>(decomp: &BlockDecomposition<T>, omega: T) -> Result<ComplexMatrix<T>> {
    ensure_nonresonant(omega, &low_loss_coefficients(decomp))?;
    let m = decomp.n() - decomp.n_b();
    let xi1 = identity::<T>(m) * real(omega) - &decomp.omega1;
    direct_inverse(&xi1)
}

pub fn admittance_expansion<T: Real>(
    decomp: &BlockDecomposition<T>,
    omega: T,
) -> Result<AdmittanceExpansion<T>> {
    let k = decomp.n_b();
    let m = decomp.n() - k;
    let xi1_inv = xi1_inverse(decomp, omega)?;
    let zero_km = ComplexMatrix::<T>::zeros(k, m);
    let zero_mk = ComplexMatrix::<T>::zeros(m, k);

    let leading = join_blocks(
        &ComplexMatrix::zeros(k, k),
        &zero_km,
        &zero_mk,
        &(&xi1_inv * i_unit::<T>()),
    );
    let lower = join_blocks(
        &identity::<T>(k),
        &zero_km,
        &(&xi1_inv * decomp.theta.adjoint()),
        &identity::<T>(m),
    );
    let middle = join_blocks(&decomp.b2_inv, &zero_km, &zero_mk, &ComplexMatrix::zeros(m, m));
    let w_blocks = &lower * middle * lower.adjoint();

    let mut kernel = ComplexMatrix::zeros(decomp.n(), m);
    let top = -(&decomp.theta * &xi1_inv);
    for j in 0..m {
        let mut col = ComplexVector::zeros(decomp.n());
        for i in 0..k {
            col[i] = top[(i, j)];
        }
        col[k + j] = real(T::one());
        let amb = &decomp.basis * col;
        let nrm = vnorm(&amb);
        kernel.set_column(j, &(amb * real(T::one() / nrm)));
    }
    Ok(AdmittanceExpansion {
        leading: decomp.to_ambient(&leading),
        w_minus1: hermitian_part(&decomp.to_ambient(&w_blocks)),
        kernel_basis: kernel,
    })
}

/// Where the force sits relative to the loss subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForceRegime {
    /// `P_B^perp f = 0`.
    InsideLossSubspace,
    /// `P_B^perp f != 0`.
    HasNoLossComponent,
}

impl ForceRegime {
    pub fn as_str(&self) -> &'static str {
        match self {
            ForceRegime::InsideLossSubspace => "inside-loss-subspace",
            ForceRegime::HasNoLossComponent => "has-no-loss-component",
        }
    }
}

fn force_regime<T: Real>(decomp: &BlockDecomposition<T>, f: &ComplexVector<T>) -> ForceRegime {
    if vnorm(&(&decomp.p_b_perp * f)) <= T::tol(LOSS_SUBSPACE_TOL) * vnorm(f) {
        ForceRegime::InsideLossSubspace
    } else {
        ForceRegime::HasNoLossComponent
    }
}

fn check_force<T: Real>(n: usize, f: &ComplexVector<T>) -> Result<()> {
    if f.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "force of length {} for a system of dimension {n}",
            f.len()
        )));
    }
    if f.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    if vnorm(f) == T::zero() {
        return Err(Error::InvalidArgument("force amplitude must be nonzero".into()));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct ResponseReport<T: Real> {
    /// Stationary amplitude `Y(omega) f`.
    pub amplitude: ComplexVector<T>,
    pub stored_energy: T,
    pub dissipated_power: T,
    pub quality_factor: Quality<T>,
    pub regime_class: ForceRegime,
    pub route: InversionRoute,
}

/// Stationary response: `U = (v,v)/2`, `W = beta (v, B v)`, `Q = |omega| U / W`.
pub fn respond<T: Real>(
    system: &DissipativeSystem<T>,
    f: &ComplexVector<T>,
    omega: T,
    beta: T,
) -> Result<ResponseReport<T>> {
    check_force(system.n(), f)?;
    let adm = admittance_exact(system, omega, beta)?;
    let decomp = system.decompose()?;
    let v = &adm.matrix * f;
    let vv = inner(&v, &v).re;
    let energy = T::lit(0.5) * vv;
    let power = (beta * inner(&v, &(system.b() * &v)).re).max(T::zero());
    let floor = T::lit(1e-15) * beta * system.b().norm() * vv;
    let quality = if power > floor {
        Quality::Finite(omega.abs() * energy / power)
    } else {
        Quality::Infinite
    };
    Ok(ResponseReport {
        amplitude: v,
        stored_energy: energy,
        dissipated_power: power,
        quality_factor: quality,
        regime_class: force_regime(&decomp, f),
        route: adm.route,
    })
}

/// Limiting behaviour of the quality factor as `beta -> infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QualityLimit {
    Zero,
    Infinite,
}

impl QualityLimit {
    pub fn as_str(&self) -> &'static str {
        match self {
            QualityLimit::Zero => "zero",
            QualityLimit::Infinite => "infinite",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseLimits<T> {
    pub energy: T,
    pub dissipated_power: T,
    pub quality: QualityLimit,
}

fn split_force<T: Real>(
    decomp: &BlockDecomposition<T>,
    f: &ComplexVector<T>,
) -> (ComplexVector<T>, ComplexVector<T>) {
    let k = decomp.n_b();
    let fb = decomp.basis.adjoint() * f;
    (fb.rows(0, k).into_owned(), fb.rows(k, decomp.n() - k).into_owned())
}

/// `beta -> infinity` limits of `U`, `W` and the class of the `Q` limit.
pub fn response_limits<T: Real>(
    decomp: &BlockDecomposition<T>,
    f: &ComplexVector<T>,
    omega: T,
) -> Result<ResponseLimits<T>> {
    check_force(decomp.n(), f)?;
    let xi1_inv = xi1_inverse(decomp, omega)?;
    let regime = force_regime(decomp, f);
    let (_, f1) = split_force(decomp, f);
    let (energy, quality) = match regime {
        ForceRegime::InsideLossSubspace => (T::zero(), QualityLimit::Zero),
        ForceRegime::HasNoLossComponent => {
            let r = &xi1_inv * f1;
            let q = if omega == T::zero() {
                QualityLimit::Zero
            } else {
                QualityLimit::Infinite
            };
            (T::lit(0.5) * inner(&r, &r).re, q)
        }
    };
    Ok(ResponseLimits {
        energy,
        dissipated_power: T::zero(),
        quality,
    })
}

/// Leading-order coefficients of `U`, `W` and `Q` in powers of `beta`.
///
/// With `f` in `ran B`: `U ~ u2 / beta^2`, `W ~ w1 / beta`, `Q ~ q / beta`.
/// Otherwise: `U -> u0`, `W ~ w1 / beta`, `Q ~ q beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseAsymptote<T> {
    pub regime: ForceRegime,
    /// `u2` or `u0` depending on the regime.
    pub energy_coefficient: T,
    pub dissipation_coefficient: T,
    /// `None` when the leading dissipation vanishes.
    pub quality_coefficient: Option<T>,
}

impl<T: Real> ResponseAsymptote<T> {
    pub fn energy(&self, beta: T) -> T {
        match self.regime {
            ForceRegime::InsideLossSubspace => self.energy_coefficient / (beta * beta),
            ForceRegime::HasNoLossComponent => self.energy_coefficient,
        }
    }

    pub fn dissipation(&self, beta: T) -> T {
        self.dissipation_coefficient / beta
    }

    pub fn quality(&self, beta: T) -> Quality<T> {
        match (self.quality_coefficient, self.regime) {
            (None, _) => Quality::Infinite,
            (Some(q), ForceRegime::InsideLossSubspace) => Quality::Finite(q / beta),
            (Some(q), ForceRegime::HasNoLossComponent) => Quality::Finite(q * beta),
        }
    }
}

/// Second-moment operator `B2^{-2} + B2^{-1} Theta Xi1^{-*} Xi1^{-1} Theta^* B2^{-1}`
/// governing the stored energy for forces in `ran B`.
fn loss_energy_operator<T: Real>(
    decomp: &BlockDecomposition<T>,
    xi1_inv: &ComplexMatrix<T>,
) -> ComplexMatrix<T> {
    let g = xi1_inv * decomp.theta.adjoint() * &decomp.b2_inv;
    hermitian_part(&(&decomp.b2_inv * &decomp.b2_inv + g.adjoint() * g))
}

pub fn response_asymptote<T: Real>(
    decomp: &BlockDecomposition<T>,
    f: &ComplexVector<T>,
    omega: T,
) -> Result<ResponseAsymptote<T>> {
    check_force(decomp.n(), f)?;
    let xi1_inv = xi1_inverse(decomp, omega)?;
    let regime = force_regime(decomp, f);
    let (f2, f1) = split_force(decomp, f);
    match regime {
        ForceRegime::InsideLossSubspace => {
            let m = loss_energy_operator(decomp, &xi1_inv);
            let u2 = T::lit(0.5) * inner(&f2, &(&m * &f2)).re;
            let w1 = inner(&f2, &(&decomp.b2_inv * &f2)).re;
            Ok(ResponseAsymptote {
                regime,
                energy_coefficient: u2,
                dissipation_coefficient: w1,
                quality_coefficient: Some(omega.abs() * u2 / w1),
            })
        }
        ForceRegime::HasNoLossComponent => {
            let exp = admittance_expansion(decomp, omega)?;
            let r = &xi1_inv * f1;
            let u0 = T::lit(0.5) * inner(&r, &r).re;
            let w1 = inner(f, &(&exp.w_minus1 * f)).re.max(T::zero());
            let floor = T::tol(1e-12) * exp.w_minus1.norm() * inner(f, f).re;
            Ok(ResponseAsymptote {
                regime,
                energy_coefficient: u0,
                dissipation_coefficient: w1,
                quality_coefficient: if w1 > floor {
                    Some(omega.abs() * u0 / w1)
                } else {
                    None
                },
            })
        }
    }
}

/// The three quantities of the energy-bound chain for `f` in `ran B`:
/// `(f, M f)/2 >= (f, B2^{-1} f) / (2 zr_max) >= (f, f) / (2 zr_max^2) > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBounds<T> {
    pub energy_coefficient: T,
    pub dissipation_bound: T,
    pub norm_bound: T,
}

pub fn loss_subspace_energy_bounds<T: Real>(
    decomp: &BlockDecomposition<T>,
    f: &ComplexVector<T>,
    omega: T,
) -> Result<EnergyBounds<T>> {
    check_force(decomp.n(), f)?;
    if force_regime(decomp, f) != ForceRegime::InsideLossSubspace {
        return Err(Error::InvalidArgument("force must lie in the loss subspace".into()));
    }
    let xi1_inv = xi1_inverse(decomp, omega)?;
    let (f2, _) = split_force(decomp, f);
    let m = loss_energy_operator(decomp, &xi1_inv);
    let zr_max = crate::linalg::sym_eig(&decomp.b2)
        .0
        .into_iter()
        .fold(T::zero(), |a, v| a.max(v));
    let half = T::lit(0.5);
    let first = half * inner(&f2, &(&m * &f2)).re;
    let second = half / zr_max * inner(&f2, &(&decomp.b2_inv * &f2)).re;
    let third = half / (zr_max * zr_max) * inner(&f2, &f2).re;
    let slack = T::tol(1e-12) * first.abs().max(T::one());
    if !(first >= second - slack && second >= third - slack && third > T::zero()) {
        return Err(Error::InequalityViolated(format!(
            "{:e} >= {:e} >= {:e} > 0 fails",
            first.as_f64(),
            second.as_f64(),
            third.as_f64()
        )));
    }
    Ok(EnergyBounds {
        energy_coefficient: first,
        dissipation_bound: second,
        norm_bound: third,
    })
}

/// `beta Y^* (beta B) Y`, which tends to `W_{-1}` as `beta -> infinity`.
pub fn scaled_dissipation_form<T: Real>(
    system: &DissipativeSystem<T>,
    omega: T,
    beta: T,
) -> Result<ComplexMatrix<T>> {
    let y = admittance_exact(system, omega, beta)?.matrix;
    Ok(y.adjoint() * system.b() * &y * real(beta * beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{canonical_system, reference_circuit};
    use crate::linalg::sym_eig;
    use crate::scalar::cplx;
    use crate::test_support::{diag, random_system};

    fn unit(n: usize, i: usize) -> ComplexVector<f64> {
        let mut v = ComplexVector::zeros(n);
        v[i] = real(1.0);
        v
    }

    #[test]
    fn frequency_classification() {
        let (s, _) = canonical_system(&reference_circuit()).unwrap();
        let low = low_loss_coefficients(&s.decompose().unwrap());
        assert!(!classify_frequency(1.0, &low).resonant);
        assert!(classify_frequency(0.0, &low).resonant);
        assert!(classify_frequency(low[2].rho, &low).resonant);
    }

    #[test]
    fn decoupled_scalar_admittance() {
        let s = DissipativeSystem::new(ComplexMatrix::zeros(2, 2), diag(&[1.0, 0.0])).unwrap();
        let y = admittance_exact(&s, 1.0, 2.0).unwrap();
        assert_eq!(y.route, InversionRoute::Schur);
        assert!((y.matrix[(0, 0)] - cplx(0.4, 0.2)).norm() < 1e-14);
        assert!((y.matrix[(1, 1)] - cplx(0.0, 1.0)).norm() < 1e-14);
        assert!(y.matrix[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn admittance_inverts_the_shifted_operator() {
        let (s, _) = canonical_system(&reference_circuit()).unwrap();
        let y = admittance_exact(&s, 1.0, 50.0).unwrap().matrix;
        let shifted = identity::<f64>(4) * real(1.0) - s.assemble(50.0).unwrap();
        let prod = &shifted * &y * cplx(0.0, -1.0);
        assert!((prod - identity::<f64>(4)).norm() < 1e-10);
        let direct = direct_inverse(&shifted).unwrap() * i_unit::<f64>();
        assert!((&y - &direct).norm() <= 1e-10 * direct.norm());
        assert!(matches!(
            admittance_exact(&s, 0.0, 10.0),
            Err(Error::ResonantFrequency { .. })
        ));
    }

    #[test]
    fn schur_route_matches_block_formula() {
        // bottom-right block of the shifted operator's Schur complement is Xi1 - Theta^* Xi2^{-1} Theta
        let (s, _) = canonical_system(&reference_circuit()).unwrap();
        let d = s.decompose().unwrap();
        let (omega, beta) = (1.0, 5.0);
        let shifted = identity::<f64>(4) * real(omega) - s.assemble(beta).unwrap();
        let blocks = d.to_blocks(&shifted);
        let sc = crate::linalg::schur_complement(&blocks, 1).unwrap();
        let xi1 = identity::<f64>(3) * real(omega) - &d.omega1;
        let xi2 = identity::<f64>(1) * real(omega) - &d.omega2 + &d.b2 * cplx(0.0, beta);
        let oracle = xi1 - d.theta.adjoint() * xi2.try_inverse().unwrap() * &d.theta;
        assert!((sc - oracle).norm() < 1e-12);
    }

    #[test]
    fn decoupled_expansion() {
        let s = DissipativeSystem::new(diag(&[1.0, 2.0, 3.0]), diag(&[2.0, 0.0, 0.0])).unwrap();
        let d = s.decompose().unwrap();
        let exp = admittance_expansion(&d, 0.5).unwrap();
        assert!((exp.w_minus1.clone() - diag(&[0.5, 0.0, 0.0])).norm() < 1e-14);
        for j in 0..2 {
            assert!(exp.kernel_basis[(0, j)].norm() < 1e-14);
        }
    }

    #[test]
    fn expansion_properties_on_circuit() {
        let (s, _) = canonical_system(&reference_circuit()).unwrap();
        let d = s.decompose().unwrap();
        let exp = admittance_expansion(&d, 1.0).unwrap();
        let w = &exp.w_minus1;
        let (vals, _) = sym_eig(w);
        assert!(vals[0] >= -1e-12 * w.norm());
        assert_eq!(vals.iter().filter(|v| **v > 1e-10 * w.norm()).count(), 1);
        assert_eq!(exp.kernel_basis.ncols(), 3);
        assert!((w * &exp.kernel_basis).norm() < 1e-10);
        let err = |beta: f64| {
            let y = admittance_exact(&s, 1.0, beta).unwrap().matrix;
            ((y - &exp.leading) * real(beta) - w).norm()
        };
        assert!(err(1e4) < err(1e3) / 5.0);
        let derr = |beta: f64| (scaled_dissipation_form(&s, 1.0, beta).unwrap() - w).norm();
        assert!(derr(1e4) < derr(1e3) / 5.0);
    }

    #[test]
    fn response_inside_loss_subspace() {
        let (s, _) = canonical_system(&reference_circuit()).unwrap();
        let d = s.decompose().unwrap();
        let f = unit(4, 1);
        let r = respond(&s, &f, 1.0, 1e3).unwrap();
        assert_eq!(r.regime_class, ForceRegime::InsideLossSubspace);
        let q = r.quality_factor.value().unwrap();
        assert!((q - r.stored_energy / r.dissipated_power).abs() < 1e-12 * q);
        let asym = response_asymptote(&d, &f, 1.0).unwrap();
        assert!((asym.dissipation_coefficient - 1.0).abs() < 1e-12);
        let bounds = loss_subspace_energy_bounds(&d, &f, 1.0).unwrap();
        assert!(bounds.norm_bound > 0.0);
        let lim = response_limits(&d, &f, 1.0).unwrap();
        assert_eq!((lim.energy, lim.quality), (0.0, QualityLimit::Zero));
        assert!(matches!(
            respond(&s, &ComplexVector::zeros(4), 1.0, 10.0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn response_with_lossless_component() {
        let (s, _) = canonical_system(&reference_circuit()).unwrap();
        let d = s.decompose().unwrap();
        let f = unit(4, 0);
        let lim = response_limits(&d, &f, 1.0).unwrap();
        assert!(lim.energy > 0.0);
        assert_eq!(lim.quality, QualityLimit::Infinite);
        let r = respond(&s, &f, 1.0, 1e4).unwrap();
        assert_eq!(r.regime_class, ForceRegime::HasNoLossComponent);
        assert!((r.stored_energy - lim.energy).abs() < 0.01 * lim.energy);
    }

    #[test]
    fn energy_bounds_tight_for_scalar_loss() {
        let s = DissipativeSystem::new(diag(&[1.0, 2.0, 3.0, 4.0]), diag(&[2.0, 2.0, 0.0, 0.0])).unwrap();
        let d = s.decompose().unwrap();
        let f = ComplexVector::from_vec(vec![cplx(1.0, 0.5), real(-0.3), real(0.0), real(0.0)]);
        let b = loss_subspace_energy_bounds(&d, &f, 0.0).unwrap();
        assert!((b.energy_coefficient - b.dissipation_bound).abs() < 1e-14);
    }

    #[test]
    fn random_energy_bounds_hold() {
        let s = random_system(6, 3, 17);
        let d = s.decompose().unwrap();
        let lb = d.loss_basis();
        for k in 0..20 {
            let t = k as f64;
            let coeffs = ComplexVector::from_vec(vec![cplx(t.sin(), 1.0), cplx(0.3, t.cos()), real(1.0 + t)]);
            let f = &lb * coeffs;
            loss_subspace_energy_bounds(&d, &f, 0.37 + 0.1 * t).unwrap();
        }
    }
}
