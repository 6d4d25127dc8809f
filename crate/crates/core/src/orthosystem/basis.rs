//! Orthonormal Bergman polynomials by Arnoldi iteration in coefficient space.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::gram::{gram_matrix, monomial_scales, Gram};
use crate::error::{Error, Result};
use crate::poly::{Poly, PolynomialC};
use crate::quadrature::DiskRule;
use crate::scalar::{cabs, cmul_add, cmul_conj_add, cmul_sub, lift, lower, Real, C64};
use crate::weight::WeightSpec;

/// `p_0, …, p_N` with positive leading coefficients `γ_n`.
#[derive(Clone, Debug)]
pub struct OrthoBasis<T = f64> {
    /// Monomial coefficients, ascending.
    pub polys: Vec<Poly<T>>,
    pub gammas: Vec<T>,
    pub rule_fingerprint: u64,
}

/// Read access to a basis at double precision, whatever its working precision.
pub trait Oracle: Sync {
    /// Largest available degree.
    fn degree(&self) -> usize;
    fn gamma(&self, n: usize) -> f64;
    /// `p_n(z)`, evaluated in the basis' own precision and rounded.
    fn eval(&self, n: usize, z: C64) -> C64;
    fn poly_f64(&self, n: usize) -> PolynomialC;
    /// Zero of `p_n` near `seed`, polished by Newton steps in working precision.
    fn polish_zero(&self, n: usize, seed: C64) -> (C64, Vec<f64>);
    /// Rounding level `u·(n+1)·max_j|c_j|·max(1,|z|)^n` of [`Oracle::eval`]; the
    /// coefficients themselves carry absolute errors of order `u·max_j|c_j|`.
    fn eval_bound(&self, n: usize, z: C64) -> f64;
}

impl<T: Real> Oracle for OrthoBasis<T> {
    fn degree(&self) -> usize {
        self.polys.len() - 1
    }

    fn gamma(&self, n: usize) -> f64 {
        self.gammas[n].to_f64()
    }

    fn eval(&self, n: usize, z: C64) -> C64 {
        lower(&self.polys[n].eval(&lift(z)))
    }

    fn poly_f64(&self, n: usize) -> PolynomialC {
        self.polys[n].to_f64()
    }

    fn polish_zero(&self, n: usize, seed: C64) -> (C64, Vec<f64>) {
        let tol = (T::unit_roundoff() * 64.0).max(1e-300);
        let out = self.polys[n].newton(lift(seed), 200, tol);
        (lower(&out.root), out.steps)
    }

    fn eval_bound(&self, n: usize, z: C64) -> f64 {
        let largest = self.polys[n].coeffs.iter().map(|c| cabs(c).to_f64()).fold(0.0, f64::max);
        T::unit_roundoff() * (n + 1) as f64 * largest * z.norm().max(1.0).powi(n as i32)
    }
}

impl<T: Real> OrthoBasis<T> {
    pub fn degree(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn eval_poly(&self, n: usize, z: &Complex<T>) -> Result<Complex<T>> {
        let poly = self.polys.get(n).ok_or(Error::DegreeOutOfRange { n, max: self.degree() })?;
        Ok(poly.eval(z))
    }

    /// Copy at double precision.
    pub fn to_f64(&self) -> OrthoBasis<f64> {
        OrthoBasis {
            polys: self.polys.iter().map(Poly::to_f64).collect(),
            gammas: self.gammas.iter().map(Real::to_f64).collect(),
            rule_fingerprint: self.rule_fingerprint,
        }
    }

    pub fn export(&self) -> BasisExport {
        BasisExport {
            degree: self.degree(),
            gammas: self.gammas.iter().map(Real::to_f64).collect(),
            coeffs: self
                .polys
                .iter()
                .map(|p| p.coeffs.iter().map(|c| [c.re.to_f64(), c.im.to_f64()]).collect())
                .collect(),
        }
    }
}

/// JSON form `{degree, gammas, coeffs}` with coefficients as `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisExport {
    pub degree: usize,
    pub gammas: Vec<f64>,
    pub coeffs: Vec<Vec<[f64; 2]>>,
}

impl BasisExport {
    pub fn to_basis(&self) -> OrthoBasis<f64> {
        OrthoBasis {
            polys: self.coeffs.iter().map(|c| Poly::new(c.iter().map(|&[re, im]| C64::new(re, im)).collect())).collect(),
            gammas: self.gammas.clone(),
            rule_fingerprint: 0,
        }
    }
}

/// Double-precision basis of degree `n`.
pub fn bergman_orthonormalize(spec: &WeightSpec, n: usize, rule: &DiskRule) -> Result<OrthoBasis> {
    orthonormalize(spec, n, rule)
}

/// Basis of degree `n` in the precision of the rule.
///
/// Works on coefficient vectors in the scaled monomials `e_j`; `z·e_j =
/// √((j+1)/(j+2)) e_{j+1}`, and inner products go through the Gram matrix.
/// Each new vector is orthogonalized twice against all previous ones.
pub fn orthonormalize<T: Real>(spec: &WeightSpec, n: usize, rule: &DiskRule<T>) -> Result<OrthoBasis<T>> {
    let gram = gram_matrix(spec, rule, n)?;
    arnoldi(&gram, n, rule.fingerprint())
}

fn arnoldi<T: Real>(gram: &Gram<T>, n: usize, fingerprint: u64) -> Result<OrthoBasis<T>> {
    let dim = n + 1;
    let scales = monomial_scales::<T>(n);
    let g00 = gram.get(0, 0).re.clone();
    if !(g00.to_f64() > 0.0) {
        return Err(Error::SingularGram { degree: 0 });
    }
    // Coefficients of p_i in the e_j basis (entries 0..=i).
    let mut p: Vec<Vec<Complex<T>>> = Vec::with_capacity(dim);
    // t_i[j] = Σ_k conj(p_i[k]) G_{jk}, so that ⟨f, p_i⟩ = Σ_j f_j t_i[j].
    let mut t: Vec<Vec<Complex<T>>> = Vec::with_capacity(dim);
    let mut gammas = Vec::with_capacity(dim);

    let p0 = vec![Complex::new(T::one() / g00.sqrt(), T::zero())];
    t.push(project(gram, &p0));
    gammas.push(p0[0].re.clone() * scales[0].clone());
    p.push(p0);

    let tol = T::from_f64(1e3 * T::unit_roundoff());
    for k in 0..n {
        // q = z p_k
        let mut q = vec![Complex::<T>::zero(); k + 2];
        for j in 0..=k {
            q[j + 1] = p[k][j].clone().scale(scales[j].clone() / scales[j + 1].clone());
        }
        for _pass in 0..2 {
            for i in 0..=k {
                let mut h = Complex::<T>::zero();
                for (qj, tj) in q.iter().zip(&t[i]) {
                    cmul_add(&mut h, qj, tj);
                }
                for (qj, pj) in q.iter_mut().zip(&p[i]) {
                    cmul_sub(qj, &h, pj);
                }
            }
        }
        let norm_sq = quadratic_form(gram, &q);
        if !(norm_sq > tol) {
            return Err(Error::SingularGram { degree: k + 1 });
        }
        let norm = norm_sq.sqrt();
        let lead = q[k + 1].clone();
        let lead_abs = cabs(&lead);
        if !(lead_abs.to_f64() > 0.0) {
            return Err(Error::SingularGram { degree: k + 1 });
        }
        // Rotate so the leading coefficient is real and positive.
        let rot = lead.conj().unscale(lead_abs.clone() * norm.clone());
        let next: Vec<Complex<T>> = q.into_iter().map(|c| c * rot.clone()).collect();
        // γ_{k+1} = γ_k / |h_{k+1,k}| ⋯ expressed through the new leading coefficient.
        gammas.push(next[k + 1].re.clone() * scales[k + 1].clone());
        t.push(project(gram, &next));
        p.push(next);
    }

    let polys = p
        .into_iter()
        .map(|c| Poly::new(c.into_iter().zip(&scales).map(|(x, s)| x.scale(s.clone())).collect()))
        .collect();
    Ok(OrthoBasis { polys, gammas, rule_fingerprint: fingerprint })
}

fn project<T: Real>(gram: &Gram<T>, p: &[Complex<T>]) -> Vec<Complex<T>> {
    (0..gram.dim)
        .map(|j| {
            let mut acc = Complex::<T>::zero();
            for (k, pk) in p.iter().enumerate() {
                cmul_conj_add(&mut acc, gram.get(j, k), pk);
            }
            acc
        })
        .collect()
}

fn quadratic_form<T: Real>(gram: &Gram<T>, q: &[Complex<T>]) -> T {
    let mut acc = Complex::<T>::zero();
    for (j, qj) in q.iter().enumerate() {
        let mut row = Complex::<T>::zero();
        for (k, qk) in q.iter().enumerate() {
            cmul_conj_add(&mut row, gram.get(j, k), qk);
        }
        cmul_add(&mut acc, qj, &row);
    }
    acc.re
}

/// `max_{j,k ≤ N} |⟨p_j, p_k⟩_w − δ_{jk}|` by direct summation over the rule's nodes.
pub fn gram_residual(spec: &WeightSpec, basis: &OrthoBasis, rule: &DiskRule) -> Result<f64> {
    let dim = basis.degree() + 1;
    let mut g = vec![C64::zero(); dim * dim];
    let mut vals = vec![C64::zero(); dim];
    rule.for_each_node::<Error>(|z, w| {
        let c = w * spec.eval_weight(z)?;
        for (v, poly) in vals.iter_mut().zip(&basis.polys) {
            *v = poly.eval(z);
        }
        for j in 0..dim {
            let a = vals[j] * c;
            for k in j..dim {
                g[j * dim + k] += a * vals[k].conj();
            }
        }
        Ok(())
    })?;
    let mut worst: f64 = 0.0;
    for j in 0..dim {
        for k in j..dim {
            let target = if j == k { C64::one() } else { C64::zero() };
            worst = worst.max((g[j * dim + k] - target).norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::QuadOrders;
    use crate::scalar::Hp;
    use crate::weight::{BlaschkeSingularity, OuterPart};

    #[test]
    fn unit_weight_basis_is_scaled_monomials() {
        let rule = DiskRule::build(&WeightSpec::unit(), QuadOrders::default()).unwrap();
        let b = bergman_orthonormalize(&WeightSpec::unit(), 40, &rule).unwrap();
        for n in 0..=40 {
            for (j, c) in b.polys[n].coeffs.iter().enumerate() {
                let expect = if j == n { ((n + 1) as f64).sqrt() } else { 0.0 };
                assert!((c - expect).norm() < 1e-12, "n={n} j={j}");
            }
            assert!((b.gammas[n] - ((n + 1) as f64).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn radial_power_weight() {
        let m = 1.0;
        let spec = WeightSpec::new(OuterPart::unit(), vec![BlaschkeSingularity::new(C64::zero(), m)]).unwrap();
        let rule = DiskRule::build(&spec, QuadOrders::default()).unwrap();
        let b = bergman_orthonormalize(&spec, 30, &rule).unwrap();
        for n in 0..=30 {
            let expect = (n as f64 + 1.0 + m / 2.0).sqrt();
            assert!((b.gammas[n] - expect).abs() < 1e-11, "n={n}");
            let lower_mass: f64 = b.polys[n].coeffs[..n].iter().map(|c| c.norm()).sum();
            assert!(lower_mass < 1e-11);
        }
    }

    #[test]
    fn orthonormal_under_direct_summation() {
        let spec = WeightSpec::new(
            OuterPart::PolyZerosOutside { factors: vec![(C64::new(0.5, 0.0), 2)], scale: 1.0 },
            vec![BlaschkeSingularity::new(C64::new(-0.2, 0.5), -1.0)],
        )
        .unwrap();
        let rule = DiskRule::build(&spec, QuadOrders::default()).unwrap();
        let b = bergman_orthonormalize(&spec, 24, &rule).unwrap();
        assert!(gram_residual(&spec, &b, &rule).unwrap() < 1e-12);
        assert!(b.gammas.iter().all(|g| *g > 0.0));
        assert_eq!(b.rule_fingerprint, rule.fingerprint());
    }

    #[test]
    fn multiprecision_agrees_with_double() {
        let spec = WeightSpec::new(
            OuterPart::PolyZerosOutside { factors: vec![(C64::new(0.5, 0.0), 2)], scale: 1.0 },
            vec![],
        )
        .unwrap();
        let orders = QuadOrders { radial: 48, angular: 64, patch: 48 };
        let lo = bergman_orthonormalize(&spec, 16, &DiskRule::build(&spec, orders).unwrap()).unwrap();
        let hi = orthonormalize::<Hp>(&spec, 16, &DiskRule::build(&spec, orders).unwrap()).unwrap();
        for n in 0..=16 {
            for (a, b) in lo.polys[n].coeffs.iter().zip(&hi.polys[n].coeffs) {
                assert!((a - lower(b)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn export_round_trip() {
        let rule = DiskRule::build(&WeightSpec::unit(), QuadOrders { radial: 16, angular: 32, patch: 8 }).unwrap();
        let b = bergman_orthonormalize(&WeightSpec::unit(), 5, &rule).unwrap();
        let json = serde_json::to_string(&b.export()).unwrap();
        let back: BasisExport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.degree, 5);
        assert_eq!(back.to_basis().polys, b.polys);
    }
}
