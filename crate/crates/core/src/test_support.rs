//! Seeded random systems for unit tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{hermitian_part, sym_eig};
use crate::scalar::{cplx, real, ComplexMatrix, ComplexVector};
use crate::system::DissipativeSystem;

pub fn diag(d: &[f64]) -> ComplexMatrix<f64> {
    ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(d.len(), d.iter().map(|&x| real(x))))
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix<f64> {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        cplx(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

/// Random Hermitian `Omega` and `B = U diag(lambda) U^*` of rank `n_b`, `lambda` in `[0.5, 2]`.
pub fn random_system(n: usize, n_b: usize, seed: u64) -> DissipativeSystem<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_matrix(&mut rng, n, n);
    let omega = hermitian_part(&g);
    let (_, u) = sym_eig(&hermitian_part(&gaussian_matrix(&mut rng, n, n)));
    let lam: Vec<f64> = (0..n)
        .map(|j| if j < n_b { rng.random_range(0.5..2.0) } else { 0.0 })
        .collect();
    let b = hermitian_part(&(&u * diag(&lam) * u.adjoint()));
    DissipativeSystem::new(omega, b).expect("random system is valid")
}
