//! The rational kernel `L(z, ζ) = ζ^{−2} K_h(z, 1/ζ̄)` and the weighted kernels.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::orthosystem::{bergman_orthonormalize, OrthoBasis};
use crate::quadrature::{DiskRule, QuadOrders};
use crate::scalar::C64;
use crate::weight::WeightSpec;

/// Largest degree used when summing `K_h(0,0)`.
pub const KH_DEGREE_CAP: usize = 320;

/// `K_h(0,0)` for `h` the pure Blaschke part of the weight, with its truncation data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KhOrigin {
    pub value: f64,
    /// Degree of the last summed term.
    pub degree: usize,
    /// Geometric estimate of the omitted tail.
    pub tail: f64,
}

type MemoKey = (String, u64, QuadOrders);

fn memo() -> &'static Mutex<HashMap<MemoKey, KhOrigin>> {
    static MEMO: OnceLock<Mutex<HashMap<MemoKey, KhOrigin>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// `K_h(0,0) = Σ_k |p_k^h(0)|²`, summed until the tail estimate drops below `tol`.
///
/// `orders` fixes the quadrature; `None` sizes it from the degree.
pub fn kh_origin(spec: &WeightSpec, tol: f64, orders: Option<QuadOrders>) -> Result<KhOrigin> {
    let h = spec.blaschke_part();
    let rho_a = spec.critical_radii().rho_a;
    let needed = if rho_a == 0.0 { 8 } else { (tol.ln() / (2.0 * rho_a.ln())).ceil() as usize + 16 };
    let degree = needed.clamp(16, KH_DEGREE_CAP);
    let orders = orders.unwrap_or_else(|| QuadOrders::for_degree(degree));
    let key = (serde_json::to_string(&h.to_config())?, tol.to_bits(), orders);
    if let Some(hit) = memo().lock().expect("memo poisoned").get(&key) {
        return Ok(*hit);
    }
    let rule = DiskRule::build(&h, orders)?;
    let basis = bergman_orthonormalize(&h, degree, &rule)?;
    let terms: Vec<f64> = basis.polys.iter().map(|p| p.coeffs[0].norm_sqr()).collect();
    let tail = geometric_tail(&terms, f64::EPSILON * terms.iter().sum::<f64>());
    if !(tail < tol) {
        return Err(Error::NotConverged(format!("K_h(0,0) series: tail {tail:e} above {tol:e} at degree {degree}")));
    }
    let out = KhOrigin { value: terms.iter().sum(), degree, tail };
    memo().lock().expect("memo poisoned").insert(key, out);
    Ok(out)
}

/// Tail estimate from the ratio of the last few terms of a nonnegative series.
/// Terms at or below `floor` count as rounding noise. Infinite when the terms
/// do not decay.
pub fn geometric_tail(terms: &[f64], floor: f64) -> f64 {
    let window = 8.min(terms.len().saturating_sub(1));
    if window == 0 {
        return f64::INFINITY;
    }
    let tail = &terms[terms.len() - window - 1..];
    let peak = tail.iter().copied().fold(0.0, f64::max);
    if peak <= floor {
        return peak;
    }
    let last = *tail.last().unwrap_or(&0.0);
    let first = tail[0];
    if last == 0.0 && first == 0.0 {
        return 0.0;
    }
    if first == 0.0 {
        return f64::INFINITY;
    }
    let ratio = (last / first).powf(1.0 / window as f64);
    if !(ratio < 1.0) {
        return f64::INFINITY;
    }
    // Scale by the window peak to stay safe on non-monotone terms.
    (peak * ratio / (1.0 - ratio)).max(last)
}

/// `L(z, ζ)` for weights with at most two singular points.
#[derive(Clone, Debug)]
pub struct KernelL {
    spec: WeightSpec,
    /// Constant `J` of the structural formula; zero unless `s = 2`.
    pub j_constant: f64,
}

impl KernelL {
    /// Builds the kernel, computing `K_h(0,0)` when `s = 2`.
    pub fn new(spec: &WeightSpec, tol: f64) -> Result<Self> {
        Self::with_orders(spec, tol, None)
    }

    pub fn with_orders(spec: &WeightSpec, tol: f64, orders: Option<QuadOrders>) -> Result<Self> {
        let j_constant = match spec.s() {
            0 | 1 => 0.0,
            2 => {
                let k = kh_origin(spec, tol, orders)?;
                let sum: f64 = spec.singularities.iter().map(|s| s.m / 2.0 * (1.0 - s.a.norm_sqr())).sum();
                k.value - 1.0 - sum
            }
            s => return Err(Error::UnsupportedSingularityCount(s)),
        };
        Ok(KernelL { spec: spec.clone(), j_constant })
    }

    pub fn spec(&self) -> &WeightSpec {
        &self.spec
    }

    /// `1/(ζ−z)² + Σ (m_k/2)(1−|a_k|²)/((ζ−z)(ζ−a_k)(1−zā_k)) + J/(q*(z)q(ζ))`.
    pub fn eval(&self, z: C64, zeta: C64) -> Result<C64> {
        let d = zeta - z;
        if d.norm() == 0.0 {
            return Err(Error::Pole { what: "L(z, ζ) at ζ = z", z: zeta });
        }
        let mut acc = (d * d).inv();
        for s in &self.spec.singularities {
            let za = zeta - s.a;
            let qs = 1.0 - z * s.a.conj();
            if za.norm() == 0.0 {
                return Err(Error::Pole { what: "L(z, ζ) at ζ = a_k", z: zeta });
            }
            if qs.norm() == 0.0 {
                return Err(Error::Pole { what: "L(z, ζ) at q*(z) = 0", z });
            }
            acc += s.m / 2.0 * (1.0 - s.a.norm_sqr()) / (d * za * qs);
        }
        if self.j_constant != 0.0 {
            let (q, _) = self.spec.eval_q_qstar(&zeta);
            let (_, qs) = self.spec.eval_q_qstar(&z);
            acc += self.j_constant / (qs * q);
        }
        Ok(acc)
    }
}

/// `L(z, ζ)`; errors for more than two singular points.
pub fn kernel_l(spec: &WeightSpec, z: C64, zeta: C64, tol: f64) -> Result<C64> {
    KernelL::new(spec, tol)?.eval(z, zeta)
}

/// Truncated kernel value with its tail estimate.
#[derive(Clone, Copy, Debug)]
pub struct KernelValue {
    pub value: C64,
    pub tail: f64,
    /// False when the terms do not decay geometrically, e.g. near the boundary.
    pub converged: bool,
}

/// `K_w(z, ζ) ≈ Σ_{k≤N} p_k(z) conj(p_k(ζ))`.
pub fn kernel_kw(z: C64, zeta: C64, basis: &OrthoBasis) -> Result<KernelValue> {
    if !(z.norm() < 1.0 && zeta.norm() < 1.0) {
        return Err(Error::Domain { what: "K_w", z: if z.norm() < 1.0 { zeta } else { z }, reason: "needs |z|, |ζ| < 1".into() });
    }
    let terms: Vec<C64> = basis.polys.iter().map(|p| p.eval(&z) * p.eval(&zeta).conj()).collect();
    let sizes: Vec<f64> = terms.iter().map(|t| t.norm()).collect();
    let scale = sizes.iter().copied().fold(1.0, f64::max);
    let tail = geometric_tail(&sizes, 64.0 * f64::EPSILON * scale);
    Ok(KernelValue { value: terms.iter().sum(), tail, converged: tail.is_finite() })
}

/// `K_h(z, 1/ζ̄)` from an orthonormal basis for `h`, summed in the region where it converges.
pub fn kh_series_reflected(basis_h: &OrthoBasis, z: C64, zeta: C64) -> C64 {
    let w = zeta.conj().inv();
    basis_h.polys.iter().map(|p| p.eval(&z) * p.eval(&w).conj()).sum()
}
