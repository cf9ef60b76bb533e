use dichotomy::circuit::{canonical_system, CircuitSpec, Loss};
use dichotomy::{high_loss_coefficients, low_loss_coefficients};

#[test]
fn circuit_coefficients_in_f32() {
    let spec = CircuitSpec::<f32> {
        c1: 2.0,
        c2: 3.0,
        c12: 4.0,
        l1: 5.0,
        l2: 6.0,
        tau: 1.0,
        loss: Loss::Beta(1.0),
    };
    let (s, beta) = canonical_system(&spec).unwrap();
    assert_eq!(beta, 1.0);
    let d = s.decompose().unwrap();
    let high = high_loss_coefficients(&d);
    assert!((high[0].zeta_ring - 1.0).abs() < 1e-5);
    let low = low_loss_coefficients(&d);
    let ds: Vec<f32> = low.iter().map(|m| m.d).collect();
    assert!((ds[1] - 1.0 / 12.0).abs() < 1e-4, "{ds:?}");
    assert!((ds[0] - 1.0 / 144.0).abs() < 1e-4, "{ds:?}");
    assert!((low[2].rho - 0.15f32.sqrt()).abs() < 1e-4);
}
