mod common;

use common::{assemble, gaussian, herm, random_system};
use dichotomy::linalg::{aitken_block_inverse, eigenvalues, positive_sqrt};
use dichotomy::{
    high_loss_coefficients, low_loss_coefficients, orbit_subspace, small_beta_coefficients,
    Complex64,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn shape() -> impl Strategy<Value = (u64, usize, usize)> {
    (any::<u64>(), 2usize..=7).prop_flat_map(|(seed, n)| (Just(seed), Just(n), 1..n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn block_decomposition_reassembles((seed, n, n_b) in shape()) {
        let s = random_system(seed, n, n_b);
        let d = s.decompose().unwrap();
        let (omega, b) = d.reassemble();
        prop_assert!((omega - s.omega()).norm() <= 1e-10 * s.omega().norm().max(1.0));
        prop_assert!((b - s.b()).norm() <= 1e-10 * s.b().norm());
        prop_assert_eq!(d.n_b(), n_b);
    }

    #[test]
    fn spectrum_sits_in_closed_lower_half_plane((seed, n, n_b) in shape(), beta in 0.0f64..50.0) {
        let s = random_system(seed, n, n_b);
        let a = assemble(&s, beta);
        let v = eigenvalues(&a).unwrap();
        let sum: Complex64 = v.iter().sum();
        prop_assert!((sum - a.trace()).norm() <= 1e-10 * a.norm().max(1.0));
        for z in &v {
            prop_assert!(z.im <= 1e-12 * a.norm());
        }
    }

    #[test]
    fn asymptotic_coefficients_split_the_traces((seed, n, n_b) in shape()) {
        let s = random_system(seed, n, n_b);
        let d = s.decompose().unwrap();
        let high = high_loss_coefficients(&d);
        let low = low_loss_coefficients(&d);
        prop_assert_eq!(high.len(), n_b);
        prop_assert_eq!(low.len(), n - n_b);
        let zr: f64 = high.iter().map(|m| m.zeta_ring).sum();
        prop_assert!((zr - s.b().trace().re).abs() <= 1e-10 * s.b().norm());
        let rho: f64 = high.iter().map(|m| m.rho).chain(low.iter().map(|m| m.rho)).sum();
        prop_assert!((rho - s.omega().trace().re).abs() <= 1e-10 * s.omega().norm().max(1.0));
        prop_assert!(low.iter().all(|m| m.d >= 0.0));
        let sigma: f64 = small_beta_coefficients(&s).iter().map(|m| m.sigma_j).sum();
        prop_assert!((sigma - s.b().trace().re).abs() <= 1e-10 * s.b().norm());
    }

    #[test]
    fn orbit_contains_the_loss_subspace((seed, n, n_b) in shape()) {
        let s = random_system(seed, n, n_b);
        let (dim, basis) = orbit_subspace(&s);
        prop_assert!(dim >= n_b && dim <= n);
        prop_assert_eq!(basis.ncols(), dim);
        // the span is invariant under Omega
        let proj = &basis * basis.adjoint();
        let image = s.omega() * &basis;
        prop_assert!((&proj * &image - &image).norm() <= 1e-8 * image.norm().max(1.0));
    }

    #[test]
    fn block_inverse_matches_lu(seed in any::<u64>(), n in 2usize..=7, k_frac in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = gaussian(&mut rng, n, n);
        let k = 1 + ((n - 1) as f64 * k_frac) as usize;
        let k = k.min(n - 1);
        let oracle = m.clone().lu().try_inverse().unwrap();
        if let Ok(inv) = aitken_block_inverse(&m, k) {
            let cond = m.norm() * oracle.norm();
            prop_assert!((inv - &oracle).norm() <= 1e-13 * cond * oracle.norm());
        }
    }

    #[test]
    fn square_root_squares_back(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gaussian(&mut rng, n, n);
        let m = herm(&(&g * g.adjoint())) + dichotomy::Matrix::identity(n, n) * Complex64::new(0.1, 0.0);
        let r = positive_sqrt(&m).unwrap();
        prop_assert!((&r - r.adjoint()).norm() <= 1e-12 * r.norm());
        prop_assert!((&r * &r - &m).norm() <= 1e-10 * m.norm());
    }
}
