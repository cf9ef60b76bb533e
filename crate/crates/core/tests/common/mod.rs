//! Seeded random systems shared by the integration tests.

use dichotomy::{Complex64, Matrix, System};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn gaussian(rng: &mut ChaCha8Rng, r: usize, k: usize) -> Matrix {
    Matrix::from_fn(r, k, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn herm(m: &Matrix) -> Matrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Gaussian Hermitian `Omega`; `B` of rank `n_b` with nonzero eigenvalues in `[0.5, 2]`.
pub fn random_system(seed: u64, n: usize, n_b: usize) -> System {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let omega = herm(&gaussian(&mut rng, n, n));
    let q = gaussian(&mut rng, n, n).qr().q();
    let d = Matrix::from_fn(n, n, |i, j| {
        if i == j && i < n_b {
            Complex64::new(rng.random_range(0.5..2.0), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    System::new(omega, herm(&(&q * d * q.adjoint()))).expect("valid random system")
}

pub fn assemble(s: &System, beta: f64) -> Matrix {
    s.omega() - s.b() * Complex64::new(0.0, beta)
}
