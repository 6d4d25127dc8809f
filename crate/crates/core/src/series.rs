//! Truncated power series arithmetic.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::{lift, Real};
use crate::weight::OuterPart;

/// Product of two series truncated to `len` terms.
pub fn mul<T: Real>(a: &[Complex<T>], b: &[Complex<T>], len: usize) -> Vec<Complex<T>> {
    let mut out = vec![Complex::<T>::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x.clone() * y.clone();
        }
    }
    out
}

/// Reciprocal `1/s` by the recursion `d_k = −(Σ_{j=1}^k s_j d_{k−j}) / s_0`.
pub fn reciprocal<T: Real>(s: &[Complex<T>], len: usize) -> Vec<Complex<T>> {
    assert!(!s.is_empty() && !s[0].is_zero(), "series must have a nonzero constant term");
    let inv0 = Complex::<T>::one() / s[0].clone();
    let mut d: Vec<Complex<T>> = Vec::with_capacity(len);
    for k in 0..len {
        if k == 0 {
            d.push(inv0.clone());
            continue;
        }
        let mut acc = Complex::<T>::zero();
        for j in 1..=k.min(s.len() - 1) {
            acc += s[j].clone() * d[k - j].clone();
        }
        d.push(-(acc * inv0.clone()));
    }
    d
}

/// `exp(g)` for a polynomial `g`, via `k f_k = Σ_j j g_j f_{k−j}`.
pub fn exp_poly<T: Real>(g: &[Complex<T>], len: usize) -> Vec<Complex<T>> {
    let mut f: Vec<Complex<T>> = Vec::with_capacity(len);
    let g0 = g.first().cloned().unwrap_or_else(Complex::zero);
    for k in 0..len {
        if k == 0 {
            f.push(crate::scalar::cexp(&g0));
            continue;
        }
        let mut acc = Complex::<T>::zero();
        for j in 1..=k.min(g.len().saturating_sub(1)) {
            acc += g[j].clone().scale(T::from_usize(j)) * f[k - j].clone();
        }
        f.push(acc.unscale(T::from_usize(k)));
    }
    f
}

/// Binomial series of `(1 − c w)^r` truncated to `len` terms.
pub fn binomial<T: Real>(c: &Complex<T>, r: f64, len: usize) -> Vec<Complex<T>> {
    let mut out: Vec<Complex<T>> = Vec::with_capacity(len);
    let mut term = Complex::<T>::one();
    let r = T::from_f64(r);
    for j in 0..len {
        out.push(term.clone());
        // t_{j+1} = t_j (j − r)/(j + 1) c
        let factor = (T::from_usize(j) - r.clone()) / T::from_usize(j + 1);
        term *= c.clone().scale(factor);
    }
    out
}

/// Maclaurin coefficients `v_0, …, v_{len−1}` of `v`.
pub fn outer_maclaurin<T: Real>(outer: &OuterPart, len: usize) -> Vec<Complex<T>> {
    let scale = T::from_f64(outer.scale());
    let mut acc: Vec<Complex<T>> = vec![Complex::zero(); len];
    if len == 0 {
        return acc;
    }
    match outer {
        OuterPart::ExpPolynomial { g, .. } => {
            let g: Vec<Complex<T>> = g.iter().map(|c| lift(*c)).collect();
            acc = exp_poly(&g, len);
        }
        _ => {
            acc[0] = Complex::one();
            for (b, r) in outer.product_factors() {
                let factor = binomial(&lift::<T>(b.conj()), r, len);
                acc = mul(&acc, &factor, len);
            }
        }
    }
    acc.into_iter().map(|c| c.scale(scale.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C64;

    #[test]
    fn geometric_reciprocal() {
        let s = vec![C64::new(1.0, 0.0), C64::new(-0.5, 0.0)];
        let d = reciprocal(&s, 10);
        for (j, x) in d.iter().enumerate() {
            assert!((x.re - 0.5f64.powi(j as i32)).abs() < 1e-16);
        }
    }

    #[test]
    fn binomial_integer_power_terminates() {
        let b = binomial(&C64::new(0.5, 0.0), 2.0, 6);
        let expect = [1.0, -1.0, 0.25, 0.0, 0.0, 0.0];
        for (x, e) in b.iter().zip(expect) {
            assert!((x.re - e).abs() < 1e-16 && x.im == 0.0);
        }
    }

    #[test]
    fn exp_series_of_identity() {
        let f = exp_poly(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)], 12);
        let mut fact = 1.0;
        for (k, x) in f.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            assert!((x.re - 1.0 / fact).abs() < 1e-16);
        }
    }

    #[test]
    fn maclaurin_matches_direct_evaluation() {
        let outer = OuterPart::PowerProduct {
            factors: vec![(C64::new(0.3, 0.4), 0.5), (C64::new(-0.2, 0.1), -1.5)],
            scale: 2.0,
        };
        let coeffs: Vec<C64> = outer_maclaurin(&outer, 80);
        let z = C64::new(0.4, -0.3);
        let series = coeffs.iter().rev().fold(C64::zero(), |acc, c| acc * z + c);
        let direct: C64 = outer.eval(&z).unwrap();
        assert!((series - direct).norm() < 1e-14);
    }
}
