//! Dense complex polynomials in ascending coefficient order.

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{cabs, lower, Real, C64};

/// Dense polynomial `Σ c_j z^j` with complex coefficients of type `T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "Complex<T>: Serialize", deserialize = "Complex<T>: Deserialize<'de>"))]
pub struct Poly<T> {
    pub coeffs: Vec<Complex<T>>,
}

/// Polynomial with double-precision coefficients.
pub type PolynomialC = Poly<f64>;

impl<T: Real> Poly<T> {
    /// Builds a polynomial, trimming exactly-zero leading coefficients.
    pub fn new(mut coeffs: Vec<Complex<T>>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex::zero());
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![Complex::zero()] }
    }

    /// `c z^n`.
    pub fn monomial(n: usize, c: Complex<T>) -> Self {
        let mut coeffs = vec![Complex::zero(); n + 1];
        coeffs[n] = c;
        Poly::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &Complex<T> {
        &self.coeffs[self.degree()]
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &Complex<T>) -> Complex<T> {
        let mut acc = Complex::<T>::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z.clone() + c.clone();
        }
        acc
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: &Complex<T>) -> (Complex<T>, Complex<T>) {
        let mut p = Complex::<T>::zero();
        let mut dp = Complex::<T>::zero();
        for c in self.coeffs.iter().rev() {
            dp = dp * z.clone() + p.clone();
            p = p * z.clone() + c.clone();
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c.clone().scale(T::from_usize(j)))
            .collect();
        Poly::new(coeffs)
    }

    /// `z^n conj(p(1/z̄))` for `n ≥ degree`.
    pub fn reversed_conj(&self, n: usize) -> Self {
        let mut coeffs = vec![Complex::<T>::zero(); n + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs[n - j] = c.conj();
        }
        Poly::new(coeffs)
    }

    pub fn scale(&self, s: &Complex<T>) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|j| {
                let a = self.coeffs.get(j).cloned().unwrap_or_else(Complex::zero);
                let b = other.coeffs.get(j).cloned().unwrap_or_else(Complex::zero);
                a + b
            })
            .collect();
        Poly::new(coeffs)
    }

    pub fn to_f64(&self) -> PolynomialC {
        Poly { coeffs: self.coeffs.iter().map(lower).collect() }
    }

    /// Newton iteration from `z0`; returns the root and the last two step sizes.
    pub fn newton(&self, z0: Complex<T>, max_iter: usize, step_tol: f64) -> NewtonOutcome<T> {
        let mut z = z0;
        let mut steps: Vec<f64> = Vec::new();
        for _ in 0..max_iter {
            let (p, dp) = self.eval_with_derivative(&z);
            if dp.is_zero() {
                break;
            }
            let dz = p / dp;
            let size = cabs(&dz).to_f64();
            z -= dz;
            steps.push(size);
            if size <= step_tol * cabs(&z).to_f64().max(1e-300) || size == 0.0 {
                break;
            }
        }
        NewtonOutcome { root: z, steps }
    }
}

/// Result of [`Poly::newton`].
#[derive(Clone, Debug)]
pub struct NewtonOutcome<T> {
    pub root: Complex<T>,
    /// Magnitudes of every Newton increment in order.
    pub steps: Vec<f64>,
}

impl PolynomialC {
    /// All roots from the eigenvalues of the companion matrix.
    pub fn roots(&self) -> Vec<C64> {
        let n = self.degree();
        if n == 0 {
            return Vec::new();
        }
        let lead = self.coeffs[n];
        let mut m = DMatrix::<C64>::zeros(n, n);
        for i in 1..n {
            m[(i, i - 1)] = C64::one();
        }
        for i in 0..n {
            m[(i, n - 1)] = -self.coeffs[i] / lead;
        }
        // The complex Schur form is upper triangular; its diagonal holds the roots.
        let t = m.schur().unpack().1;
        (0..n).map(|i| t[(i, i)]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn horner_and_derivative() {
        // 1 + 2z + 3z^2
        let p = Poly::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        let z = c(0.5, -0.25);
        let direct = c(1.0, 0.0) + z * 2.0 + z * z * 3.0;
        let (v, dv) = p.eval_with_derivative(&z);
        assert!((v - direct).norm() < 1e-15);
        assert!((dv - (c(2.0, 0.0) + z * 6.0)).norm() < 1e-15);
        assert!((p.derivative().eval(&z) - dv).norm() < 1e-15);
    }

    #[test]
    fn reversal_matches_definition() {
        let p = Poly::new(vec![c(1.0, 1.0), c(0.0, 2.0), c(-1.0, 0.5)]);
        let z = c(0.3, 0.7);
        let rev = p.reversed_conj(2).eval(&z);
        let zbar_inv = c(1.0, 0.0) / z.conj();
        let direct = z * z * p.eval(&zbar_inv).conj();
        assert!((rev - direct).norm() < 1e-13);
    }

    #[test]
    fn companion_roots_recover_factors() {
        // (z - 0.5)(z + 0.25i)(z - 2)
        let r = [c(0.5, 0.0), c(0.0, -0.25), c(2.0, 0.0)];
        let mut p = Poly::new(vec![c(1.0, 0.0)]);
        for root in r {
            let mut next = vec![C64::zero(); p.coeffs.len() + 1];
            for (j, a) in p.coeffs.iter().enumerate() {
                next[j + 1] += a;
                next[j] -= a * root;
            }
            p = Poly::new(next);
        }
        let found = p.roots();
        for root in r {
            let best = found.iter().map(|z| (z - root).norm()).fold(f64::MAX, f64::min);
            assert!(best < 1e-12, "missing root {root}");
        }
    }

    #[test]
    fn newton_converges_quadratically() {
        let p = Poly::new(vec![c(-2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let out = p.newton(c(1.5, 0.0), 50, 1e-15);
        assert!((out.root.re - 2f64.sqrt()).abs() < 1e-15);
        assert!(out.steps.len() < 10);
    }
}
