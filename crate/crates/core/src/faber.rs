//! Laurent coefficients of `v*` and the Faber polynomials of `z^n v*(z)`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::PolynomialC;
use crate::quadrature::DiskRule;
use crate::scalar::{lift, C64};
use crate::series::{binomial, exp_poly, mul};
use crate::weight::{OuterPart, WeightSpec};

/// `v*(z) = Σ_{j≤K} c_j z^{−j} + …` with `c_0 = 1/v(0)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaurentCoeffs {
    pub c: Vec<C64>,
}

impl LaurentCoeffs {
    /// Largest stored index `K`.
    pub fn k(&self) -> usize {
        self.c.len() - 1
    }
}

/// `c_j = conj(d_j)` where `Σ d_j w^j` is the Maclaurin series of `1/v`.
pub fn laurent_coeffs(spec: &WeightSpec, k: usize) -> LaurentCoeffs {
    LaurentCoeffs { c: reciprocal_maclaurin(&spec.outer, k + 1).into_iter().map(|d| d.conj()).collect() }
}

/// Maclaurin coefficients of `1/v`, built in closed form for each class.
fn reciprocal_maclaurin(outer: &OuterPart, len: usize) -> Vec<C64> {
    let inv_scale = 1.0 / outer.scale();
    let series = match outer {
        OuterPart::ExpPolynomial { g, .. } => {
            let neg: Vec<C64> = g.iter().map(|c| -c).collect();
            exp_poly(&neg, len)
        }
        _ => {
            let mut acc = vec![C64::new(0.0, 0.0); len];
            acc[0] = C64::new(1.0, 0.0);
            for (b, r) in outer.product_factors() {
                acc = mul(&acc, &binomial(&lift::<f64>(b.conj()), -r, len), len);
            }
            acc
        }
    };
    series.into_iter().map(|c| c * inv_scale).collect()
}

/// `F_n(z) = c_0 z^n + c_1 z^{n−1} + ⋯ + c_n`.
pub fn faber_poly(n: usize, coeffs: &LaurentCoeffs) -> Result<PolynomialC> {
    if coeffs.c.len() <= n {
        return Err(Error::Precondition(format!("Faber polynomial of degree {n} needs {} Laurent coefficients, got {}", n + 1, coeffs.c.len())));
    }
    Ok(PolynomialC::new(coeffs.c[..=n].iter().rev().copied().collect()))
}

/// `∫_D |F_n|² w dσ` on the given rule.
pub fn faber_weighted_norm(spec: &WeightSpec, n: usize, rule: &DiskRule, coeffs: &LaurentCoeffs) -> Result<f64> {
    let f = faber_poly(n, coeffs)?;
    let total = rule.integrate(|z| -> Result<Complex<f64>> {
        Ok(C64::new(f.eval(z).norm_sqr() * spec.eval_weight(z)?, 0.0))
    })?;
    Ok(total.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::QuadOrders;
    use crate::weight::BlaschkeSingularity;

    fn linear() -> WeightSpec {
        WeightSpec::new(OuterPart::PolyZerosOutside { factors: vec![(C64::new(0.5, 0.0), 1)], scale: 1.0 }, vec![]).unwrap()
    }

    #[test]
    fn unit_coefficients() {
        let c = laurent_coeffs(&WeightSpec::unit(), 5);
        assert_eq!(c.k(), 5);
        assert_eq!(c.c[0], C64::new(1.0, 0.0));
        assert!(c.c[1..].iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn geometric_coefficients_and_faber() {
        let c = laurent_coeffs(&linear(), 12);
        for (j, x) in c.c.iter().enumerate() {
            assert!((x - 0.5f64.powi(j as i32)).norm() < 1e-15);
        }
        let f3 = faber_poly(3, &c).unwrap();
        let expect = [0.125, 0.25, 0.5, 1.0];
        assert!(f3.coeffs.iter().zip(expect).all(|(a, b)| (a - b).norm() < 1e-15));
        assert!(faber_poly(13, &c).is_err());
    }

    #[test]
    fn leading_term_is_reciprocal_of_v0() {
        let specs = [
            linear(),
            WeightSpec::new(OuterPart::PowerProduct { factors: vec![(C64::new(0.3, 0.4), 0.5)], scale: 2.0 }, vec![]).unwrap(),
            WeightSpec::new(OuterPart::ExpPolynomial { g: vec![C64::new(0.5, 0.0), C64::new(1.0, 1.0)], scale: 1.5 }, vec![]).unwrap(),
        ];
        for spec in specs {
            let c = laurent_coeffs(&spec, 4);
            assert!((c.c[0].re - spec.critical_radii().c0).abs() < 1e-14);
            assert!(c.c[0].im.abs() < 1e-15);
        }
    }

    #[test]
    fn laurent_series_reproduces_vstar() {
        let spec = WeightSpec::new(
            OuterPart::PowerProduct { factors: vec![(C64::new(0.3, 0.4), 0.5), (C64::new(-0.2, 0.1), -1.5)], scale: 2.0 },
            vec![],
        )
        .unwrap();
        let c = laurent_coeffs(&spec, 120);
        let z = C64::from_polar(0.9, 1.1);
        let series: C64 = c.c.iter().enumerate().map(|(j, x)| x * z.powi(-(j as i32))).sum();
        assert!((series - spec.eval_vstar(&z).unwrap()).norm() < 1e-13);
    }

    #[test]
    fn faber_remainder_is_small_on_inner_circle() {
        let spec = WeightSpec::new(OuterPart::PolyZerosOutside { factors: vec![(C64::new(0.5, 0.0), 2)], scale: 1.0 }, vec![]).unwrap();
        let c = laurent_coeffs(&spec, 40);
        for n in [10, 20, 40] {
            let f = faber_poly(n, &c).unwrap();
            let z = C64::from_polar(0.9, 0.3);
            let rem = (f.eval(&z) - z.powu(n as u32) * spec.eval_vstar(&z).unwrap()).norm();
            assert!(rem < 10.0 * 0.6f64.powi(n as i32), "n={n} rem={rem}");
        }
    }

    #[test]
    fn weighted_norms() {
        let rule = DiskRule::build(&WeightSpec::unit(), QuadOrders::default()).unwrap();
        let c = laurent_coeffs(&WeightSpec::unit(), 20);
        assert!((faber_weighted_norm(&WeightSpec::unit(), 20, &rule, &c).unwrap() - 1.0 / 21.0).abs() < 1e-14);

        let spec = WeightSpec::new(OuterPart::unit(), vec![BlaschkeSingularity::new(C64::new(0.0, 0.0), 1.0)]).unwrap();
        let rule = DiskRule::build(&spec, QuadOrders::default()).unwrap();
        let c = laurent_coeffs(&spec, 20);
        assert!((faber_weighted_norm(&spec, 20, &rule, &c).unwrap() - 1.0 / 21.5).abs() < 1e-12);
    }
}
