//! One-dimensional Gauss rules.

use std::num::NonZeroUsize;

use gauss_quad::{FiniteAboveNegOneF64, GaussJacobi};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Nodes and weights of a rule on a bounded interval.
#[derive(Clone, Debug, PartialEq)]
pub struct LineRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> LineRule<T> {
    /// Affine image on `[lo, hi]`.
    pub fn mapped(&self, lo: &T, hi: &T) -> LineRule<T> {
        let half = (hi.clone() - lo.clone()) / T::from_f64(2.0);
        let mid = (hi.clone() + lo.clone()) / T::from_f64(2.0);
        LineRule {
            nodes: self.nodes.iter().map(|x| mid.clone() + half.clone() * x.clone()).collect(),
            weights: self.weights.iter().map(|w| half.clone() * w.clone()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre_pair<T: Real>(n: usize, x: &T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x.clone();
    for k in 1..n {
        let kf = T::from_usize(k);
        let p2 = (T::from_usize(2 * k + 1) * x.clone() * p1.clone() - kf.clone() * p0) / (kf + T::one());
        p0 = p1;
        p1 = p2;
    }
    // (1 − x²) P_n' = n (P_{n−1} − x P_n)
    let dp = T::from_usize(n) * (p0 - x.clone() * p1.clone()) / (T::one() - x.clone() * x.clone());
    (p1, dp)
}

/// Gauss–Legendre rule with `n` points on `[-1, 1]`, computed by Newton
/// iteration in the working precision of `T`.
pub fn gauss_legendre<T: Real>(n: usize) -> LineRule<T> {
    assert!(n >= 1, "Gauss-Legendre needs at least one node");
    if n == 1 {
        return LineRule { nodes: vec![T::zero()], weights: vec![T::from_f64(2.0)] };
    }
    let extra_steps = {
        let digits = -T::unit_roundoff().log2();
        let mut steps = 0;
        let mut bits = 50.0;
        while bits < digits {
            bits *= 2.0;
            steps += 1;
        }
        steps + 1
    };
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_pair(n, &x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let mut xt = T::from_f64(x);
        for _ in 0..extra_steps {
            let (p, dp) = legendre_pair(n, &xt);
            xt -= p / dp;
        }
        if n % 2 == 1 && i == n / 2 {
            xt = T::zero();
        }
        let (_, dp) = legendre_pair(n, &xt);
        let w = T::from_f64(2.0) / ((T::one() - xt.clone() * xt.clone()) * dp.clone() * dp);
        nodes[i] = xt.clone();
        nodes[n - 1 - i] = -xt;
        weights[i] = w.clone();
        weights[n - 1 - i] = w;
    }
    // Ascending order.
    nodes.reverse();
    weights.reverse();
    LineRule { nodes, weights }
}

/// Rule for `∫_0^1 u^β φ(u) du` with smooth `φ` and `β > −1`.
///
/// Geometric levels `[σ^{l+1}, σ^l]` carry Gauss–Legendre rules times `u^β`;
/// the innermost piece `[0, σ^L]` uses Gauss–Jacobi. Grading keeps integrands
/// like `u^β · u^{−m}` accurate too, which a single Jacobi rule would not.
pub fn singular_radial(beta: f64, order: usize) -> Result<LineRule<f64>> {
    const SIGMA: f64 = 0.15;
    const LEVELS: usize = 6;
    if order < 4 {
        return Err(Error::InvalidOrder(format!("patch order {order} must be at least 4")));
    }
    let beta_checked = FiniteAboveNegOneF64::new(beta)
        .ok_or_else(|| Error::InvalidOrder(format!("radial exponent {beta} must exceed -1")))?;
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let inner = SIGMA.powi(LEVELS as i32);
    let jacobi_order = 10;
    let gj = GaussJacobi::new(
        NonZeroUsize::new(jacobi_order).expect("nonzero"),
        FiniteAboveNegOneF64::new(0.0).expect("valid"),
        beta_checked,
    );
    // ∫_0^s u^β φ = s^{β+1} 2^{−β−1} ∫_{−1}^{1} (1+x)^β φ(s(1+x)/2) dx
    let factor = inner.powf(beta + 1.0) * 2f64.powf(-beta - 1.0);
    for &(x, w) in gj.as_node_weight_pairs() {
        nodes.push(inner * (1.0 + x) / 2.0);
        weights.push(factor * w);
    }
    for l in (0..LEVELS).rev() {
        let hi = SIGMA.powi(l as i32);
        let lo = hi * SIGMA;
        let n = (order >> l).max(24);
        let gl = gauss_legendre::<f64>(n).mapped(&lo, &hi);
        for (u, w) in gl.nodes.iter().zip(&gl.weights) {
            nodes.push(*u);
            weights.push(w * u.powf(beta));
        }
    }
    Ok(LineRule { nodes, weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Hp;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 16, 97] {
            let r = gauss_legendre::<f64>(n);
            for k in 0..(2 * n) {
                let s: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(k as i32)).sum();
                let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
                assert!((s - exact).abs() < 1e-13, "n={n} k={k}: {s} vs {exact}");
            }
        }
    }

    #[test]
    fn legendre_nodes_are_ascending_and_interior() {
        let r = gauss_legendre::<f64>(40);
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(r.nodes[0] > -1.0 && r.nodes[39] < 1.0);
    }

    #[test]
    fn multiprecision_legendre_is_accurate() {
        let r = gauss_legendre::<Hp>(30);
        // ∫ x^58 = 2/59
        let mut s = Hp::new(0.0);
        for (x, w) in r.nodes.iter().zip(&r.weights) {
            s += w.clone() * x.pow_int(58);
        }
        let err = s - Hp::new(2.0) / Hp::new(59.0);
        assert!(err.to_f64().abs() < 1e-100);
    }

    #[test]
    fn singular_rule_handles_power_and_power_times_inverse() {
        for m in [-1.5, -1.0, -0.5, 1.0, 3.0] {
            let beta = m + 1.0;
            let r = singular_radial(beta, 48).unwrap();
            // ∫ u^β (1 + u + u^5) du
            let s: f64 = r.nodes.iter().zip(&r.weights).map(|(u, w)| w * (1.0 + u + u.powi(5))).sum();
            let exact = 1.0 / (beta + 1.0) + 1.0 / (beta + 2.0) + 1.0 / (beta + 6.0);
            assert!((s - exact).abs() < 1e-13, "m={m}");
            // ∫ u^β u^{−m} du = 1/2
            let t: f64 = r.nodes.iter().zip(&r.weights).map(|(u, w)| w * u.powf(-m)).sum();
            assert!((t - 0.5).abs() < 1e-12, "m={m}: {t}");
        }
    }
}
