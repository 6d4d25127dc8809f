//! Oracle checks against closed forms through the public API.
//! Area is normalized so the disk has measure one.

use bergman::orthosystem::{bergman_orthonormalize, gram_residual, BasisExport};
use bergman::quadrature::{DiskRule, QuadOrders};
use bergman::{WeightSpec, C64};

#[test]
fn unit_weight_basis_is_scaled_monomials() {
    let spec = WeightSpec::unit();
    let rule = DiskRule::build(&spec, QuadOrders::for_degree(24)).unwrap();
    let basis = bergman_orthonormalize(&spec, 24, &rule).unwrap();
    let z = C64::new(0.3, -0.4);
    for n in 0..=24 {
        let exact = (n as f64 + 1.0).sqrt() * z.powu(n as u32);
        let got = basis.eval_poly(n, &z).unwrap();
        assert!((got - exact).norm() <= 1e-10 * (1.0 + exact.norm()), "n={n}: {got} vs {exact}");
    }
}

#[test]
fn polynomial_weight_basis_is_orthonormal() {
    let spec = WeightSpec::from_json(r#"{"outer":{"kind":"poly","factors":[[0.5,0,2]]}}"#).unwrap();
    let rule = DiskRule::build(&spec, QuadOrders::for_degree(32)).unwrap();
    let basis = bergman_orthonormalize(&spec, 32, &rule).unwrap();
    assert!(gram_residual(&spec, &basis, &rule).unwrap() < 1e-10);
}

#[test]
fn export_round_trips_through_json() {
    let spec = WeightSpec::unit();
    let rule = DiskRule::build(&spec, QuadOrders::for_degree(8)).unwrap();
    let basis = bergman_orthonormalize(&spec, 8, &rule).unwrap();
    let export = basis.export();
    let back: BasisExport = serde_json::from_str(&serde_json::to_string(&export).unwrap()).unwrap();
    assert_eq!(back, export);
    let z = C64::new(-0.2, 0.7);
    let restored = back.to_basis();
    for n in 0..=8 {
        let d = restored.eval_poly(n, &z).unwrap() - basis.eval_poly(n, &z).unwrap();
        assert!(d.norm() < 1e-14);
    }
}

#[test]
fn malformed_weight_is_rejected() {
    assert!(WeightSpec::from_json(r#"{"outer":{"kind":"poly","factors":[[0.5,0,2]]}"#).is_err());
    assert!(WeightSpec::from_json(r#"{"outer":{"kind":"nope"}}"#).is_err());
}
