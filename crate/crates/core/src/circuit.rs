//! Two-loop RLC circuit: loop inductances `L1, L2`, capacitors `C1, C2` on each
//! loop and a shared coupling capacitor `C12`, with a resistor `R2` on loop 2.
//!
//! The Lagrangian `L q'' + R q' + G q = 0` is brought to the first-order form
//! `v' = -i (Omega - i beta B) v` with `Omega = [[0, -i Phi], [i Phi, 0]]`,
//! `Phi = (L^{-1/2} G L^{-1/2})^{1/2}`, `B = diag(0, 1/tau, 0, 0)` and
//! `beta = R2 tau / L2`.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, positive_sqrt};
use crate::scalar::{cplx, i_unit, real, ComplexMatrix, Real};
use crate::system::DissipativeSystem;

/// Coupling entries of `Phi` at or below this size are rejected.
pub const PHI_COUPLING_TOL: f64 = 1e-14;

/// How the loss is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Loss<T> {
    /// Physical resistance `R2`.
    Resistance(T),
    /// Dimensionless loss parameter `beta = R2 tau / L2`.
    Beta(T),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitSpec<T> {
    pub c1: T,
    pub c2: T,
    pub c12: T,
    pub l1: T,
    pub l2: T,
    /// Time unit.
    pub tau: T,
    pub loss: Loss<T>,
}

/// Parameters used throughout the worked example: `C1 = 2, C2 = 3, C12 = 4,
/// L1 = 5, L2 = 6, tau = 1`, with `beta = 1`.
pub fn reference_circuit() -> CircuitSpec<f64> {
    CircuitSpec {
        c1: 2.0,
        c2: 3.0,
        c12: 4.0,
        l1: 5.0,
        l2: 6.0,
        tau: 1.0,
        loss: Loss::Beta(1.0),
    }
}

impl<T: Real> CircuitSpec<T> {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("c1", self.c1),
            ("c2", self.c2),
            ("c12", self.c12),
            ("l1", self.l1),
            ("l2", self.l2),
            ("tau", self.tau),
        ];
        for (name, v) in positive {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::InvalidCircuit(format!(
                    "{name} must be positive and finite, got {}",
                    v.as_f64()
                )));
            }
        }
        let (name, v) = match self.loss {
            Loss::Resistance(r) => ("r2", r),
            Loss::Beta(b) => ("beta", b),
        };
        if !(v >= T::zero()) || !v.is_finite() {
            return Err(Error::InvalidCircuit(format!(
                "{name} must be nonnegative and finite, got {}",
                v.as_f64()
            )));
        }
        Ok(())
    }

    /// Dimensionless loss `beta = R2 tau / L2`.
    pub fn beta(&self) -> T {
        match self.loss {
            Loss::Beta(b) => b,
            Loss::Resistance(r) => r * self.tau / self.l2,
        }
    }

    /// Resistance `R2 = L2 beta / tau`.
    pub fn r2(&self) -> T {
        match self.loss {
            Loss::Resistance(r) => r,
            Loss::Beta(b) => self.l2 * b / self.tau,
        }
    }

    /// Same circuit with the loss given as `beta`.
    pub fn with_beta(&self, beta: T) -> Self {
        Self {
            loss: Loss::Beta(beta),
            ..*self
        }
    }
}

/// Inductance, stiffness (inverse capacitance) and resistance matrices.
#[derive(Debug, Clone)]
pub struct LagrangianMatrices<T: Real> {
    pub l: ComplexMatrix<T>,
    pub g: ComplexMatrix<T>,
    pub r: ComplexMatrix<T>,
}

fn mat2<T: Real>(a: T, b: T, c: T, d: T) -> ComplexMatrix<T> {
    ComplexMatrix::from_row_slice(2, 2, &[real(a), real(b), real(c), real(d)])
}

pub fn lagrangian_matrices<T: Real>(spec: &CircuitSpec<T>) -> Result<LagrangianMatrices<T>> {
    spec.validate()?;
    let one = T::one();
    let k = one / spec.c12;
    let l = mat2(spec.l1, T::zero(), T::zero(), spec.l2);
    let g = mat2(one / spec.c1 + k, -k, -k, one / spec.c2 + k);
    let r = mat2(T::zero(), T::zero(), T::zero(), spec.r2());
    for (name, m) in [("L", &l), ("G", &g)] {
        let min = hermitian_eig(m)?.real_eigenvalues()[0];
        if !(min > T::zero()) {
            return Err(Error::InvalidCircuit(format!(
                "{name} is not positive definite (min eigenvalue {:e})",
                min.as_f64()
            )));
        }
    }
    Ok(LagrangianMatrices { l, g, r })
}

/// `Phi^2 = L^{-1/2} G L^{-1/2}` for diagonal `L`, and its positive square root.
pub fn phi_from_lagrangian<T: Real>(
    l: &ComplexMatrix<T>,
    g: &ComplexMatrix<T>,
) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    let (phi_squared, _) = crate::system::canonicalize_mass(l, g)?;
    let phi = positive_sqrt(&phi_squared)?;
    let coupling = phi[(0, 1)].re.abs();
    if coupling <= T::lit(PHI_COUPLING_TOL) {
        return Err(Error::PhiOffDiagonalZero {
            value: coupling.as_f64(),
        });
    }
    Ok((phi_squared, phi))
}

/// `(Phi^2, Phi)` for the circuit. `Phi^2` is evaluated entrywise:
/// `[(1/C1 + 1/C12)/L1, -1/(C12 sqrt(L1 L2)); ., (1/C2 + 1/C12)/L2]`.
pub fn build_phi<T: Real>(spec: &CircuitSpec<T>) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    let lm = lagrangian_matrices(spec)?;
    let one = T::one();
    let off = -one / (spec.c12 * (spec.l1 * spec.l2).sqrt());
    let phi_squared = mat2(
        (one / spec.c1 + one / spec.c12) / spec.l1,
        off,
        off,
        (one / spec.c2 + one / spec.c12) / spec.l2,
    );
    let (via_mass, phi) = phi_from_lagrangian(&lm.l, &lm.g)?;
    debug_assert!((via_mass - &phi_squared).norm() <= T::tol(1e-12) * phi_squared.norm());
    Ok((phi_squared, phi))
}

/// First-order system `(Omega, B)` of the circuit and its loss parameter `beta`.
pub fn canonical_system<T: Real>(spec: &CircuitSpec<T>) -> Result<(DissipativeSystem<T>, T)> {
    let (_, phi) = build_phi(spec)?;
    let mut omega = ComplexMatrix::zeros(4, 4);
    let i = i_unit::<T>();
    for r in 0..2 {
        for c in 0..2 {
            omega[(r, c + 2)] = -i * phi[(r, c)];
            omega[(r + 2, c)] = i * phi[(r, c)];
        }
    }
    let mut b = ComplexMatrix::zeros(4, 4);
    b[(1, 1)] = real(T::one() / spec.tau);
    Ok((DissipativeSystem::new(omega, b)?, spec.beta()))
}

/// Closed-form low-loss data of the circuit in terms of `Phi`:
/// `rho = 0` with `d = tau (Phi12^2 - Phi11 Phi22)^2 / (Phi11^2 + Phi12^2)`, and
/// `rho = +-sqrt(Phi11^2 + Phi12^2)` with `d = tau Phi12^2 (Phi11 + Phi22)^2 / (2 (Phi11^2 + Phi12^2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitLowLoss<T> {
    pub rho_zero_d: T,
    pub rho_pm: T,
    pub rho_pm_d: T,
}

pub fn closed_form_low_loss<T: Real>(phi: &ComplexMatrix<T>, tau: T) -> CircuitLowLoss<T> {
    let p11 = phi[(0, 0)].re;
    let p12 = phi[(0, 1)].re;
    let p22 = phi[(1, 1)].re;
    let s = p11 * p11 + p12 * p12;
    let det_term = p12 * p12 - p11 * p22;
    let sum = p11 + p22;
    CircuitLowLoss {
        rho_zero_d: tau * det_term * det_term / s,
        rho_pm: s.sqrt(),
        rho_pm_d: T::lit(0.5) * tau * p12 * p12 * sum * sum / s,
    }
}

/// `det(zeta^2 L + i zeta R - G)` for the circuit's Lagrangian matrices.
pub fn lagrangian_determinant<T: Real>(
    lm: &LagrangianMatrices<T>,
    zeta: num_complex::Complex<T>,
) -> num_complex::Complex<T> {
    let m = &lm.l * (zeta * zeta) + &lm.r * (cplx(T::zero(), T::one()) * zeta) - &lm.g;
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::large_beta::{high_loss_coefficients, low_loss_coefficients};
    use crate::linalg::general_eig;
    use crate::scalar::cplx;

    #[test]
    fn reference_values_and_stiffness() {
        let spec = reference_circuit();
        assert_eq!(
            (spec.c1, spec.c2, spec.c12, spec.l1, spec.l2, spec.tau),
            (2.0, 3.0, 4.0, 5.0, 6.0, 1.0)
        );
        let lm = lagrangian_matrices(&spec).unwrap();
        assert!((lm.g[(0, 0)].re - 0.75).abs() < 1e-15);
        assert!((lm.g[(0, 1)].re + 0.25).abs() < 1e-15);
        assert!((lm.g[(1, 1)].re - 7.0 / 12.0).abs() < 1e-15);
        assert_eq!(spec.r2(), 6.0);
        assert_eq!(spec.with_beta(10.0).r2(), 60.0);
        let from_r = CircuitSpec { loss: Loss::Resistance(60.0), ..spec };
        assert_eq!(from_r.beta(), 10.0);
    }

    #[test]
    fn weak_coupling_and_symmetric_specs() {
        let spec = CircuitSpec { c12: 1e12, ..reference_circuit() };
        let lm = lagrangian_matrices(&spec).unwrap();
        assert!(lm.g[(0, 1)].norm() < 1e-11);
        let sym = CircuitSpec { c1: 2.0, c2: 2.0, l1: 3.0, l2: 3.0, ..reference_circuit() };
        let lm = lagrangian_matrices(&sym).unwrap();
        assert_eq!(lm.g[(0, 0)], lm.g[(1, 1)]);
        assert_eq!(lm.g[(0, 1)], lm.g[(1, 0)]);
    }

    #[test]
    fn invalid_circuit_names_the_field() {
        let spec = CircuitSpec { l1: 0.0, ..reference_circuit() };
        match lagrangian_matrices(&spec) {
            Err(Error::InvalidCircuit(msg)) => assert!(msg.contains("l1")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn phi_for_reference_values() {
        let (p2, phi) = build_phi(&reference_circuit()).unwrap();
        let off = -1.0 / (4.0 * 30f64.sqrt());
        assert!((p2[(0, 0)].re - 0.15).abs() < 1e-15);
        assert!((p2[(0, 1)].re - off).abs() < 1e-15);
        assert!((p2[(1, 1)].re - 7.0 / 72.0).abs() < 1e-15);
        assert!((phi[(0, 0)].re - 0.381543).abs() < 1e-6);
        assert!((phi[(0, 1)].re + 0.066519).abs() < 1e-6);
        assert!((phi[(1, 1)].re - 0.304627).abs() < 1e-6);
        assert!((&phi * &phi - &p2).norm() < 1e-12);
        // Phi12^2 - Phi11 Phi22 = -sqrt(det Phi^2)
        let det_p2 = p2[(0, 0)].re * p2[(1, 1)].re - p2[(0, 1)].re.powi(2);
        let lhs = phi[(0, 1)].re.powi(2) - phi[(0, 0)].re * phi[(1, 1)].re;
        assert!((lhs + det_p2.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn zero_coupling_is_rejected() {
        let l = mat2(1.0, 0.0, 0.0, 1.0);
        let g = mat2(4.0, 0.0, 0.0, 9.0);
        assert!(matches!(
            phi_from_lagrangian(&l, &g),
            Err(Error::PhiOffDiagonalZero { .. })
        ));
    }

    #[test]
    fn canonical_system_structure() {
        let (sys, beta) = canonical_system(&reference_circuit()).unwrap();
        assert_eq!((sys.n(), sys.n_b(), beta), (4, 1, 1.0));
        assert_eq!(sys.b()[(1, 1)], real(1.0));
        let d = sys.decompose().unwrap();
        let high = high_loss_coefficients(&d);
        assert_eq!(high.len(), 1);
        assert!((high[0].zeta_ring - 1.0).abs() < 1e-14);
        assert!(high[0].rho.abs() < 1e-14);
        assert!((high[0].w_ring[1].norm() - 1.0).abs() < 1e-14);

        let (_, phi) = build_phi(&reference_circuit()).unwrap();
        let cf = closed_form_low_loss(&phi, 1.0);
        assert!((cf.rho_zero_d - 1.0 / 12.0).abs() < 1e-12);
        assert!((cf.rho_pm_d - 1.0 / 144.0).abs() < 1e-12);
        assert!((cf.rho_pm - 0.15f64.sqrt()).abs() < 1e-12);
        let low = low_loss_coefficients(&d);
        assert!((low[0].rho + cf.rho_pm).abs() < 1e-10 && (low[0].d - cf.rho_pm_d).abs() < 1e-10);
        assert!(low[1].rho.abs() < 1e-10 && (low[1].d - cf.rho_zero_d).abs() < 1e-10);
        assert!((low[2].rho - cf.rho_pm).abs() < 1e-10 && (low[2].d - cf.rho_pm_d).abs() < 1e-10);
    }

    #[test]
    fn omega_spectrum_pairs_phi_spectrum() {
        let (sys, _) = canonical_system(&reference_circuit()).unwrap();
        let (_, phi) = build_phi(&reference_circuit()).unwrap();
        let pe = hermitian_eig(&phi).unwrap().real_eigenvalues();
        let oe = hermitian_eig(sys.omega()).unwrap().real_eigenvalues();
        let expect = [-pe[1], -pe[0], pe[0], pe[1]];
        for (a, b) in oe.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((oe[3] - 0.4199221).abs() < 1e-6);
        assert!((oe[2] - 0.2662477).abs() < 1e-6);
    }

    #[test]
    fn characteristic_polynomial_identity() {
        let spec = reference_circuit();
        for beta in [0.3, 1.0, 5.0] {
            let spec = spec.with_beta(beta);
            let (sys, _) = canonical_system(&spec).unwrap();
            let lm = lagrangian_matrices(&spec).unwrap();
            let eig = general_eig(&sys.assemble(beta).unwrap()).unwrap();
            let det_l = spec.l1 * spec.l2;
            for k in 0..20 {
                let t = k as f64 * 0.37;
                let zeta = cplx(1.3 * t.cos() - 0.2, 0.9 * (1.7 * t).sin());
                let lhs: num_complex::Complex<f64> =
                    eig.eigenvalues.iter().map(|z| zeta - z).product();
                let rhs = lagrangian_determinant(&lm, zeta) / det_l;
                assert!((lhs - rhs).norm() <= 1e-8 * rhs.norm().max(1e-300), "beta {beta} zeta {zeta}");
            }
        }
    }
}
