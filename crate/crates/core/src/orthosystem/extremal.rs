//! Least-norm property of the monic orthogonal polynomial.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::OrthoBasis;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::quadrature::DiskRule;
use crate::scalar::C64;
use crate::weight::WeightSpec;

/// Outcome of [`monic_norm_extremality`].
#[derive(Clone, Debug)]
pub struct ExtremalityReport {
    pub trials: usize,
    /// `max(‖Q‖² − ‖P‖², 0)` over all trials, where `Q = γ_n⁻¹p_n`.
    pub max_norm_violation: f64,
    /// `max |‖P‖² − ‖P−Q‖² − ‖Q‖²| / ‖P‖²`.
    pub max_identity_residual: f64,
    /// `|‖Q‖²γ_n² − 1|`.
    pub monic_norm_residual: f64,
}

impl ExtremalityReport {
    /// Largest of the three violations.
    pub fn max_violation(&self) -> f64 {
        self.max_norm_violation.max(self.max_identity_residual).max(self.monic_norm_residual)
    }
}

/// Compares `γ_n⁻¹p_n` against `trials` random monic competitors of degree `n`.
pub fn monic_norm_extremality(
    spec: &WeightSpec,
    basis: &OrthoBasis,
    n: usize,
    rule: &DiskRule,
    trials: usize,
) -> Result<ExtremalityReport> {
    if n > basis.degree() {
        return Err(Error::DegreeOutOfRange { n, max: basis.degree() });
    }
    let (nodes, weights) = rule.nodes_and_weights();
    let w: Vec<f64> = nodes
        .iter()
        .zip(&weights)
        .map(|(z, q)| spec.eval_weight(z).map(|x| x * q))
        .collect::<Result<_>>()?;
    let norm_sq = |vals: &[C64]| -> f64 { vals.iter().zip(&w).map(|(v, x)| v.norm_sqr() * x).sum() };

    let inv_gamma = 1.0 / basis.gammas[n];
    let q_vals: Vec<C64> = nodes.iter().map(|z| basis.polys[n].eval(z) * inv_gamma).collect();
    let q_norm = norm_sq(&q_vals);

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ n as u64);
    let mut report = ExtremalityReport {
        trials,
        max_norm_violation: 0.0,
        max_identity_residual: 0.0,
        monic_norm_residual: (q_norm * basis.gammas[n].powi(2) - 1.0).abs(),
    };
    for _ in 0..trials {
        let noise = Poly::new(
            (0..n.max(1))
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * 0.5)
                .collect(),
        );
        let d_vals: Vec<C64> = if n == 0 { vec![C64::new(0.0, 0.0); nodes.len()] } else { nodes.iter().map(|z| noise.eval(z)).collect() };
        let p_vals: Vec<C64> = q_vals.iter().zip(&d_vals).map(|(q, d)| q + d).collect();
        let p_norm = norm_sq(&p_vals);
        let d_norm = norm_sq(&d_vals);
        report.max_norm_violation = report.max_norm_violation.max(q_norm - p_norm);
        report.max_identity_residual = report.max_identity_residual.max((p_norm - d_norm - q_norm).abs() / p_norm);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthosystem::bergman_orthonormalize;
    use crate::quadrature::QuadOrders;
    use crate::weight::{BlaschkeSingularity, OuterPart};

    #[test]
    fn unit_weight_degree_five() {
        let spec = WeightSpec::unit();
        let rule = DiskRule::build(&spec, QuadOrders::default()).unwrap();
        let basis = bergman_orthonormalize(&spec, 8, &rule).unwrap();
        let r = monic_norm_extremality(&spec, &basis, 5, &rule, 100).unwrap();
        assert_eq!(r.max_norm_violation, 0.0);
        assert!(r.max_identity_residual < 1e-12);
        assert!(r.monic_norm_residual < 1e-12);
    }

    #[test]
    fn singular_weight_identity() {
        let spec = WeightSpec::new(
            OuterPart::PolyZerosOutside { factors: vec![(C64::new(0.5, 0.0), 2)], scale: 1.0 },
            vec![BlaschkeSingularity::new(C64::new(0.5, 0.0), 1.0)],
        )
        .unwrap();
        let rule = DiskRule::build(&spec, QuadOrders::default()).unwrap();
        let basis = bergman_orthonormalize(&spec, 20, &rule).unwrap();
        let r = monic_norm_extremality(&spec, &basis, 20, &rule, 100).unwrap();
        assert!(r.max_violation() < 1e-10, "{r:?}");
    }
}
