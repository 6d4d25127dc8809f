//! The weight family `w = |v|² ∏ |(z − a_k)/(1 − ā_k z)|^{m_k}` on the unit disk.
//!
//! `v` is analytic and zero-free on the closed disk. Three closed-form classes
//! are supported so that the exterior reflection `v*(z) = 1/conj(v(1/z̄))`, its
//! Laurent coefficients and the critical radii are all available exactly.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cexp, cpowf, cpowi, lift, lower, Real, C64};

/// The factor `|(z − a)/(1 − ā z)|^m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlaschkeSingularity {
    pub a: C64,
    pub m: f64,
}

impl BlaschkeSingularity {
    pub fn new(a: C64, m: f64) -> Self {
        BlaschkeSingularity { a, m }
    }

    /// True when `|z − a|^m` is not smooth at `a` (anything but an even integer power).
    pub fn is_singular(&self) -> bool {
        !(self.m > 0.0 && (self.m / 2.0).fract() == 0.0)
    }
}

/// The analytic, zero-free outer factor `v`.
#[derive(Clone, Debug, PartialEq)]
pub enum OuterPart {
    /// `scale · ∏ (1 − b̄ z)^r` with positive integer `r`.
    PolyZerosOutside { factors: Vec<(C64, u32)>, scale: f64 },
    /// `scale · ∏ (1 − b̄ z)^r` with real `r ≠ 0`, principal branches.
    PowerProduct { factors: Vec<(C64, f64)>, scale: f64 },
    /// `scale · exp(g(z))` with polynomial `g`, `Im g(0) = 0`.
    ExpPolynomial { g: Vec<C64>, scale: f64 },
}

impl OuterPart {
    /// `v ≡ 1`.
    pub fn unit() -> Self {
        OuterPart::PolyZerosOutside { factors: Vec::new(), scale: 1.0 }
    }

    pub fn scale(&self) -> f64 {
        match self {
            OuterPart::PolyZerosOutside { scale, .. }
            | OuterPart::PowerProduct { scale, .. }
            | OuterPart::ExpPolynomial { scale, .. } => *scale,
        }
    }

    /// Factors `(b, r)` of the product variants with `r` widened to `f64`.
    pub fn product_factors(&self) -> Vec<(C64, f64)> {
        match self {
            OuterPart::PolyZerosOutside { factors, .. } => {
                factors.iter().map(|&(b, r)| (b, r as f64)).collect()
            }
            OuterPart::PowerProduct { factors, .. } => factors.clone(),
            OuterPart::ExpPolynomial { .. } => Vec::new(),
        }
    }

    pub fn is_unit(&self) -> bool {
        match self {
            OuterPart::PolyZerosOutside { factors, scale } => factors.is_empty() && *scale == 1.0,
            OuterPart::PowerProduct { factors, scale } => factors.is_empty() && *scale == 1.0,
            OuterPart::ExpPolynomial { g, scale } => {
                *scale == 1.0 && g.iter().all(|c| c.is_zero())
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let scale = self.scale();
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidWeight(format!("scale must be positive, got {scale}")));
        }
        for (b, r) in self.product_factors() {
            let modulus = b.norm();
            if !(modulus > 0.0 && modulus < 1.0) {
                return Err(Error::InvalidWeight(format!("factor point {b} must satisfy 0 < |b| < 1")));
            }
            if r == 0.0 || !r.is_finite() {
                return Err(Error::InvalidWeight(format!("factor exponent {r} must be finite and nonzero")));
            }
        }
        if let OuterPart::ExpPolynomial { g, .. } = self {
            if g.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
                return Err(Error::InvalidWeight("non-finite exponent coefficient".into()));
            }
            if g.first().is_some_and(|c| c.im != 0.0) {
                return Err(Error::InvalidWeight("Im g(0) must vanish so that v(0) > 0".into()));
            }
        }
        Ok(())
    }

    /// `v(z)`.
    pub fn eval<T: Real>(&self, z: &Complex<T>) -> Result<Complex<T>> {
        let scale = T::from_f64(self.scale());
        match self {
            OuterPart::PolyZerosOutside { factors, .. } => {
                let mut acc = Complex::new(scale, T::zero());
                for &(b, r) in factors {
                    let f = Complex::<T>::one() - lift::<T>(b.conj()) * z.clone();
                    acc *= cpowi(&f, r as i64);
                }
                Ok(acc)
            }
            OuterPart::PowerProduct { factors, .. } => {
                let mut acc = Complex::new(scale, T::zero());
                for &(b, r) in factors {
                    let f = Complex::<T>::one() - lift::<T>(b.conj()) * z.clone();
                    acc *= power_factor(&f, r, "outer factor", z)?;
                }
                Ok(acc)
            }
            OuterPart::ExpPolynomial { g, .. } => {
                let mut acc = Complex::<T>::zero();
                for c in g.iter().rev() {
                    acc = acc * z.clone() + lift::<T>(*c);
                }
                Ok(cexp(&acc).scale(scale))
            }
        }
    }

    /// `v*(z) = 1/conj(v(1/z̄))`, continued to every `z ≠ 0` where it is
    /// single valued: integer factors anywhere off their poles, fractional
    /// factors only outside `|b|`.
    pub fn eval_star<T: Real>(&self, z: &Complex<T>) -> Result<Complex<T>> {
        let zf = lower(z);
        let reject = |reason: String| Err(Error::Domain { what: "v*", z: zf, reason });
        match self {
            OuterPart::ExpPolynomial { g, .. } => {
                if g.len() > 1 && zf.norm() == 0.0 {
                    return reject("essential singularity at the origin".into());
                }
            }
            _ => {
                for (b, r) in self.product_factors() {
                    if zf.norm() == 0.0 {
                        return reject("v* is not defined at the origin".into());
                    }
                    if r.fract() != 0.0 && zf.norm() <= b.norm() {
                        return reject(format!("requires |z| > {} for a fractional factor", b.norm()));
                    }
                    if r > 0.0 && zf == b {
                        return Err(Error::Pole { what: "v*", z: zf });
                    }
                }
            }
        }
        let inv_scale = T::one() / T::from_f64(self.scale());
        match self {
            OuterPart::PolyZerosOutside { factors, .. } => {
                let mut acc = Complex::<T>::one();
                for &(b, r) in factors {
                    let f = Complex::<T>::one() - lift::<T>(b) / z.clone();
                    acc *= cpowi(&f, r as i64);
                }
                Ok(acc.inv().scale(inv_scale))
            }
            OuterPart::PowerProduct { factors, .. } => {
                let mut acc = Complex::<T>::one();
                for &(b, r) in factors {
                    let f = Complex::<T>::one() - lift::<T>(b) / z.clone();
                    acc *= power_factor(&f, -r, "v*", z)?;
                }
                Ok(acc.scale(inv_scale))
            }
            OuterPart::ExpPolynomial { g, .. } => {
                let w = z.clone().inv();
                let mut acc = Complex::<T>::zero();
                for c in g.iter().rev() {
                    acc = acc * w.clone() + lift::<T>(c.conj());
                }
                Ok(cexp(&(-acc)).scale(inv_scale))
            }
        }
    }

    /// Radius beyond which `v*` is analytic and zero-free.
    pub fn rho_v(&self) -> f64 {
        self.product_factors().iter().map(|(b, _)| b.norm()).fold(0.0, f64::max)
    }

    /// Exponents of `v*` at the finite points where it may fail to be analytic.
    /// `None` marks an essential singularity.
    fn star_exponents(&self) -> Vec<(C64, Option<f64>)> {
        match self {
            OuterPart::PolyZerosOutside { .. } | OuterPart::PowerProduct { .. } => {
                let mut out = Vec::new();
                for (b, r) in self.product_factors() {
                    // (1 − b/z)^{−r} = z^r (z − b)^{−r}
                    out.push((b, Some(-r)));
                    out.push((C64::zero(), Some(r)));
                }
                out
            }
            OuterPart::ExpPolynomial { g, .. } => {
                if g.iter().skip(1).any(|c| !c.is_zero()) {
                    vec![(C64::zero(), None)]
                } else {
                    Vec::new()
                }
            }
        }
    }
}

fn power_factor<T: Real>(f: &Complex<T>, r: f64, what: &'static str, z: &Complex<T>) -> Result<Complex<T>> {
    if r.fract() == 0.0 && r.abs() < 64.0 {
        return Ok(cpowi(f, r as i64));
    }
    let ff = lower(f);
    if ff.im == 0.0 && ff.re <= 0.0 {
        return Err(Error::Domain {
            what,
            z: lower(z),
            reason: "on the branch cut of a fractional power".into(),
        });
    }
    Ok(cpowf(f, &T::from_f64(r)))
}

/// A full weight specification.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSpec {
    pub outer: OuterPart,
    pub singularities: Vec<BlaschkeSingularity>,
}

/// Radii and constants derived from a [`WeightSpec`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalRadii {
    pub rho_w: f64,
    pub rho_v: f64,
    pub rho_a: f64,
    /// `1/v(0)`, the value of `v*` at infinity.
    pub c0: f64,
    /// `Σ m_k`.
    pub m_total: f64,
}

const MERGE_TOL: f64 = 1e-14;
const INTEGER_TOL: f64 = 1e-12;

impl WeightSpec {
    pub fn new(outer: OuterPart, singularities: Vec<BlaschkeSingularity>) -> Result<Self> {
        let spec = WeightSpec { outer, singularities };
        spec.validate()?;
        Ok(spec)
    }

    /// `w ≡ 1`.
    pub fn unit() -> Self {
        WeightSpec { outer: OuterPart::unit(), singularities: Vec::new() }
    }

    /// Weights `∏ |(z − a)/(1 − āz)|^m / |1 − āz|^r` with even positive `r`,
    /// i.e. `v = ∏ (1 − āz)^{−r/2}`.
    pub fn bernstein_szego(points: &[(C64, f64, u32)]) -> Result<Self> {
        let mut factors = Vec::new();
        let mut sing = Vec::new();
        for &(a, m, r) in points {
            if r == 0 || r % 2 != 0 {
                return Err(Error::InvalidWeight(format!("exponent r = {r} must be even and positive")));
            }
            factors.push((a, -(r as f64) / 2.0));
            sing.push(BlaschkeSingularity::new(a, m));
        }
        WeightSpec::new(OuterPart::PowerProduct { factors, scale: 1.0 }, sing)
    }

    /// `(a, m, r)` triples when the spec belongs to the even-`r` family above.
    pub fn bernstein_szego_parameters(&self) -> Option<Vec<(C64, f64, u32)>> {
        let OuterPart::PowerProduct { factors, scale } = &self.outer else {
            return None;
        };
        if *scale != 1.0 || factors.len() != self.singularities.len() || factors.is_empty() {
            return None;
        }
        let mut out = Vec::new();
        for s in &self.singularities {
            let &(_, e) = factors.iter().find(|(b, _)| (*b - s.a).norm() < MERGE_TOL)?;
            let r = -2.0 * e;
            if !(r > 0.0 && r.fract() == 0.0 && (r / 2.0).fract() == 0.0) {
                return None;
            }
            out.push((s.a, s.m, r as u32));
        }
        Some(out)
    }

    pub fn s(&self) -> usize {
        self.singularities.len()
    }

    fn validate(&self) -> Result<()> {
        self.outer.validate()?;
        for (i, s) in self.singularities.iter().enumerate() {
            if !(s.a.norm() < 1.0) {
                return Err(Error::InvalidWeight(format!("singularity {} must lie in the open disk", s.a)));
            }
            if !(s.m > -2.0) || s.m == 0.0 || !s.m.is_finite() {
                return Err(Error::InvalidWeight(format!("exponent m = {} must satisfy m > -2, m != 0", s.m)));
            }
            for t in &self.singularities[..i] {
                if (t.a - s.a).norm() < 1e-12 {
                    return Err(Error::InvalidWeight(format!("singularity {} is repeated", s.a)));
                }
            }
        }
        Ok(())
    }

    pub fn critical_radii(&self) -> CriticalRadii {
        let rho_v = self.outer.rho_v();
        let rho_a = self.singularities.iter().map(|s| s.a.norm()).fold(0.0, f64::max);
        CriticalRadii {
            rho_w: self.rho_w(),
            rho_v,
            rho_a,
            c0: 1.0 / self.outer.scale() / self.outer_at_origin_factor(),
            m_total: self.singularities.iter().map(|s| s.m).sum(),
        }
    }

    fn outer_at_origin_factor(&self) -> f64 {
        match &self.outer {
            OuterPart::ExpPolynomial { g, .. } => g.first().map_or(1.0, |c| c.re.exp()),
            _ => 1.0,
        }
    }

    /// Smallest radius outside of which `v*/q` continues analytically.
    ///
    /// Exponents of `v*` and `1/q` are accumulated at each finite point; a
    /// point is harmless when its net exponent is a non-negative integer.
    fn rho_w(&self) -> f64 {
        let mut points: Vec<(C64, Option<f64>)> = Vec::new();
        let mut add = |z: C64, e: Option<f64>| {
            if let Some(slot) = points.iter_mut().find(|(p, _)| (*p - z).norm() < MERGE_TOL) {
                slot.1 = match (slot.1, e) {
                    (Some(x), Some(y)) => Some(x + y),
                    _ => None,
                };
            } else {
                points.push((z, e));
            }
        };
        for (z, e) in self.outer.star_exponents() {
            add(z, e);
        }
        for s in &self.singularities {
            add(s.a, Some(-1.0));
        }
        points
            .iter()
            .filter(|(_, e)| match e {
                None => true,
                Some(x) => !(*x > -INTEGER_TOL && (x - x.round()).abs() < INTEGER_TOL),
            })
            .map(|(z, _)| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn eval_outer<T: Real>(&self, z: &Complex<T>) -> Result<Complex<T>> {
        self.outer.eval(z)
    }

    pub fn eval_vstar<T: Real>(&self, z: &Complex<T>) -> Result<Complex<T>> {
        self.outer.eval_star(z)
    }

    /// `w(z)`. Fails at a singularity with negative exponent.
    pub fn eval_weight<T: Real>(&self, z: &Complex<T>) -> Result<T> {
        let v = self.outer.eval(z)?;
        let mut w = v.norm_sqr();
        for s in &self.singularities {
            let a = lift::<T>(s.a);
            let num = (z.clone() - a.clone()).norm_sqr();
            if num.is_zero() {
                if s.m < 0.0 {
                    return Err(Error::SingularPoint(lower(z)));
                }
                return Ok(T::zero());
            }
            let den = (Complex::<T>::one() - a.conj() * z.clone()).norm_sqr();
            let ratio = num / den;
            let half = s.m / 2.0;
            w *= if half.fract() == 0.0 && half.abs() < 64.0 {
                ratio.pow_int(half as i32)
            } else {
                ratio.pow_real(&T::from_f64(half))
            };
        }
        Ok(w)
    }

    /// `(q(z), q*(z))` with `q = ∏(z − a_k)` and `q* = ∏(1 − ā_k z)`.
    pub fn eval_q_qstar<T: Real>(&self, z: &Complex<T>) -> (Complex<T>, Complex<T>) {
        let mut q = Complex::<T>::one();
        let mut qs = Complex::<T>::one();
        for s in &self.singularities {
            let a = lift::<T>(s.a);
            q *= z.clone() - a.clone();
            qs *= Complex::<T>::one() - a.conj() * z.clone();
        }
        (q, qs)
    }

    /// Same spec with `v ≡ 1`.
    pub fn blaschke_part(&self) -> WeightSpec {
        WeightSpec { outer: OuterPart::unit(), singularities: self.singularities.clone() }
    }

    /// True when the weight is smooth on the disk (only even positive `m_k`).
    pub fn is_smooth(&self) -> bool {
        self.singularities.iter().all(|s| !s.is_singular())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: WeightConfig = serde_json::from_str(text)?;
        cfg.to_spec()
    }

    pub fn to_config(&self) -> WeightConfig {
        let singularities = self.singularities.iter().map(|s| [s.a.re, s.a.im, s.m]).collect();
        let scale = Some(self.outer.scale()).filter(|&s| s != 1.0);
        let outer = match &self.outer {
            OuterPart::PolyZerosOutside { factors, .. } => OuterConfig {
                kind: OuterKind::Poly,
                factors: factors.iter().map(|&(b, r)| [b.re, b.im, r as f64]).collect(),
                coeffs: Vec::new(),
                scale,
            },
            OuterPart::PowerProduct { factors, .. } => OuterConfig {
                kind: OuterKind::Power,
                factors: factors.iter().map(|&(b, r)| [b.re, b.im, r]).collect(),
                coeffs: Vec::new(),
                scale,
            },
            OuterPart::ExpPolynomial { g, .. } => OuterConfig {
                kind: OuterKind::Exp,
                factors: Vec::new(),
                coeffs: g.iter().map(|c| [c.re, c.im]).collect(),
                scale,
            },
        };
        WeightConfig { outer, singularities }
    }
}

/// JSON form of a weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightConfig {
    pub outer: OuterConfig,
    #[serde(default)]
    pub singularities: Vec<[f64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OuterConfig {
    pub kind: OuterKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coeffs: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OuterKind {
    Poly,
    Power,
    Exp,
}

impl WeightConfig {
    pub fn to_spec(&self) -> Result<WeightSpec> {
        let scale = self.outer.scale.unwrap_or(1.0);
        let outer = match self.outer.kind {
            OuterKind::Poly => {
                if !self.outer.coeffs.is_empty() {
                    return Err(Error::InvalidWeight("kind \"poly\" takes \"factors\", not \"coeffs\"".into()));
                }
                let mut factors = Vec::new();
                for &[re, im, r] in &self.outer.factors {
                    if !(r >= 1.0 && r.fract() == 0.0 && r < 1e6) {
                        return Err(Error::InvalidWeight(format!("poly exponent {r} must be a positive integer")));
                    }
                    factors.push((C64::new(re, im), r as u32));
                }
                OuterPart::PolyZerosOutside { factors, scale }
            }
            OuterKind::Power => {
                if !self.outer.coeffs.is_empty() {
                    return Err(Error::InvalidWeight("kind \"power\" takes \"factors\", not \"coeffs\"".into()));
                }
                let factors = self.outer.factors.iter().map(|&[re, im, r]| (C64::new(re, im), r)).collect();
                OuterPart::PowerProduct { factors, scale }
            }
            OuterKind::Exp => {
                if !self.outer.factors.is_empty() {
                    return Err(Error::InvalidWeight("kind \"exp\" takes \"coeffs\", not \"factors\"".into()));
                }
                let g = self.outer.coeffs.iter().map(|&[re, im]| C64::new(re, im)).collect();
                OuterPart::ExpPolynomial { g, scale }
            }
        };
        let singularities = self
            .singularities
            .iter()
            .map(|&[re, im, m]| BlaschkeSingularity::new(C64::new(re, im), m))
            .collect();
        WeightSpec::new(outer, singularities)
    }
}

/// Evaluates `|(z − a)/(1 − āz)|` factor by factor; used by tests as an independent path.
pub fn blaschke_modulus(a: C64, z: C64) -> f64 {
    ((z - a) / (C64::one() - a.conj() * z)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn poly(b: C64, r: u32) -> OuterPart {
        OuterPart::PolyZerosOutside { factors: vec![(b, r)], scale: 1.0 }
    }

    #[test]
    fn radii_examples() {
        let unit = WeightSpec::unit().critical_radii();
        assert_eq!((unit.rho_w, unit.c0), (0.0, 1.0));

        let lin = WeightSpec::new(poly(c(0.5, 0.0), 1), vec![]).unwrap().critical_radii();
        assert_eq!(lin.rho_w, 0.5);

        let e = WeightSpec::new(
            OuterPart::ExpPolynomial { g: vec![c(0.0, 0.0), c(1.0, 0.0)], scale: 1.0 },
            vec![BlaschkeSingularity::new(c(0.5, 0.0), 2.0)],
        )
        .unwrap()
        .critical_radii();
        assert_eq!((e.rho_v, e.rho_a, e.rho_w), (0.0, 0.5, 0.5));
    }

    #[test]
    fn bernstein_szego_cancels_the_pole() {
        // v*/q = 1/z for a = 0.5, m = 2, r = 2.
        let spec = WeightSpec::bernstein_szego(&[(c(0.5, 0.0), 2.0, 2)]).unwrap();
        let r = spec.critical_radii();
        assert_eq!(r.rho_w, 0.0);
        assert_eq!(r.rho_a, 0.5);
        assert_eq!(spec.bernstein_szego_parameters().unwrap(), vec![(c(0.5, 0.0), 2.0, 2)]);
    }

    #[test]
    fn outer_examples() {
        let unit = WeightSpec::unit();
        assert_eq!(unit.eval_outer(&c(0.3, 0.1)).unwrap(), c(1.0, 0.0));
        let sq = WeightSpec::new(poly(c(0.5, 0.0), 2), vec![]).unwrap();
        assert!((sq.eval_outer(&c(1.0, 0.0)).unwrap() - c(0.25, 0.0)).norm() < 1e-15);
        let e = OuterPart::ExpPolynomial { g: vec![c(0.0, 0.0), c(1.0, 0.0)], scale: 1.0 };
        let v = e.eval(&c(0.0, std::f64::consts::FRAC_PI_2)).unwrap();
        assert!((v - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn vstar_examples() {
        let lin = WeightSpec::new(poly(c(0.5, 0.0), 1), vec![]).unwrap();
        assert!((lin.eval_vstar(&c(2.0, 0.0)).unwrap() - c(4.0 / 3.0, 0.0)).norm() < 1e-15);
        // continued inside |b| for integer factors, pole at b
        assert!((lin.eval_vstar(&c(0.25, 0.0)).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(lin.eval_vstar(&c(0.5, 0.0)).is_err());
        assert!(lin.eval_vstar(&c(0.0, 0.0)).is_err());
        let frac = WeightSpec::new(OuterPart::PowerProduct { factors: vec![(c(0.5, 0.0), 0.5)], scale: 1.0 }, vec![]).unwrap();
        assert!(frac.eval_vstar(&c(0.4, 0.0)).is_err());
        let z = C64::from_polar(1.0, 0.7);
        let prod = lin.eval_vstar(&z).unwrap() * lin.eval_outer(&z).unwrap().conj();
        assert!((prod.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn weight_examples() {
        let origin = WeightSpec::new(OuterPart::unit(), vec![BlaschkeSingularity::new(c(0.0, 0.0), 2.0)]).unwrap();
        assert!((origin.eval_weight(&c(0.5, 0.0)).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(WeightSpec::unit().eval_weight(&c(0.2, 0.9)).unwrap(), 1.0);

        let spec = WeightSpec::new(poly(c(0.5, 0.0), 1), vec![BlaschkeSingularity::new(c(0.3, 0.0), 1.0)]).unwrap();
        let expect = 0.7f64.powi(2) * (0.3 / 0.82);
        assert!((spec.eval_weight(&c(0.6, 0.0)).unwrap() - expect).abs() < 1e-15);

        let neg = WeightSpec::new(OuterPart::unit(), vec![BlaschkeSingularity::new(c(0.3, 0.0), -1.0)]).unwrap();
        assert!(matches!(neg.eval_weight(&c(0.3, 0.0)), Err(Error::SingularPoint(_))));
        let pos = WeightSpec::new(OuterPart::unit(), vec![BlaschkeSingularity::new(c(0.3, 0.0), 1.0)]).unwrap();
        assert_eq!(pos.eval_weight(&c(0.3, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn q_examples() {
        assert_eq!(WeightSpec::unit().eval_q_qstar(&c(0.4, 0.1)), (c(1.0, 0.0), c(1.0, 0.0)));
        let one = WeightSpec::new(OuterPart::unit(), vec![BlaschkeSingularity::new(c(0.5, 0.0), 1.0)]).unwrap();
        assert_eq!(one.eval_q_qstar(&c(0.0, 0.0)), (c(-0.5, 0.0), c(1.0, 0.0)));
        let a = [c(0.3, 0.0), c(0.0, -0.4)];
        let two = WeightSpec::new(
            OuterPart::unit(),
            a.iter().map(|&a| BlaschkeSingularity::new(a, 1.0)).collect(),
        )
        .unwrap();
        let z = c(0.1, 0.0);
        let (q, qs) = two.eval_q_qstar(&z);
        assert!((q - (z - a[0]) * (z - a[1])).norm() < 1e-16);
        assert!((qs - (1.0 - a[0].conj() * z) * (1.0 - a[1].conj() * z)).norm() < 1e-16);
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(WeightSpec::new(OuterPart::unit(), vec![BlaschkeSingularity::new(c(1.0, 0.0), 1.0)]).is_err());
        assert!(WeightSpec::new(OuterPart::unit(), vec![BlaschkeSingularity::new(c(0.1, 0.0), -2.0)]).is_err());
        assert!(WeightSpec::new(OuterPart::unit(), vec![BlaschkeSingularity::new(c(0.1, 0.0), 0.0)]).is_err());
        let dup = vec![BlaschkeSingularity::new(c(0.1, 0.0), 1.0), BlaschkeSingularity::new(c(0.1, 0.0), 2.0)];
        assert!(WeightSpec::new(OuterPart::unit(), dup).is_err());
        assert!(WeightSpec::new(poly(c(1.5, 0.0), 1), vec![]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"outer":{"kind":"power","factors":[[0.6,0.0,0.5]]},"singularities":[[0.2,-0.1,-1.5]]}"#;
        let spec = WeightSpec::from_json(text).unwrap();
        assert_eq!(spec.s(), 1);
        let back = serde_json::to_string(&spec.to_config()).unwrap();
        assert_eq!(WeightSpec::from_json(&back).unwrap(), spec);
        assert!(WeightSpec::from_json(r#"{"outer":{"kind":"poly","factors":[[0.5,0,1.5]]}}"#).is_err());
        assert!(WeightSpec::from_json(r#"{"outer":{"kind":"cubic"}}"#).is_err());
    }
}
