//! Contour moments `α_{n,k}`, the `h/g` recursion, `H_n`, `Q_n` and the
//! integral representation of `p_n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{geometric_tail, KernelL};
use crate::orthosystem::OrthoBasis;
use crate::quadrature::{integrate_circle, CircleRule};
use crate::scalar::C64;
use crate::series::outer_maclaurin;
use crate::weight::WeightSpec;

/// Default contour radius for the `α` cross-check: three quarters of the way
/// from `max(ρ_v, ρ_w)` to 1, which keeps the `η^{−n}` rounding growth small.
pub fn default_eta(spec: &WeightSpec) -> f64 {
    let radii = spec.critical_radii();
    (radii.rho_v.max(radii.rho_w) + 3.0) / 4.0
}

/// Row `α_{n,k}`, `n ≤ k ≤ K`, with its contour cross-check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlphaTable {
    pub n: usize,
    pub k_max: usize,
    pub eta: f64,
    /// `α_{n,n}, …, α_{n,K}` by coefficient convolution.
    pub alpha: Vec<C64>,
    /// Same entries by circle quadrature on `|ζ| = η`.
    pub contour: Vec<C64>,
    /// `max_{k<n} |α_{n,k}|` along the contour path (the convolution path is exactly zero there).
    pub below_diagonal: f64,
    /// `max_k |convolution − contour|`.
    pub path_gap: f64,
}

impl AlphaTable {
    /// `α_{n,k}`, zero below the diagonal.
    pub fn get(&self, k: usize) -> C64 {
        if k < self.n {
            C64::new(0.0, 0.0)
        } else {
            self.alpha[k - self.n]
        }
    }
}

/// Relative agreement demanded between the two `α` paths.
pub const ALPHA_PATH_TOL: f64 = 1e-8;

/// `α_{n,k} = Σ_j conj(p_{k,j}) v_{j−n}`, checked against
/// `conj(α_{n,k}) = (1/2πi) ∮_{|ζ|=η} ζ^{−n−1} p_k(ζ) / v*(ζ) dζ`.
pub fn alpha_table(spec: &WeightSpec, basis: &OrthoBasis, n: usize, k_max: usize, eta: Option<f64>) -> Result<AlphaTable> {
    let table = alpha_paths(spec, basis, n, k_max, eta)?;
    for (i, (a, b)) in table.alpha.iter().zip(&table.contour).enumerate() {
        if (a - b).norm() > ALPHA_PATH_TOL * a.norm().max(1.0) {
            return Err(Error::AlphaMismatch { n, k: n + i, conv: a.norm(), contour: b.norm() });
        }
    }
    Ok(table)
}

/// Both `α` paths without the agreement check.
pub fn alpha_paths(spec: &WeightSpec, basis: &OrthoBasis, n: usize, k_max: usize, eta: Option<f64>) -> Result<AlphaTable> {
    if k_max > basis.degree() || n > k_max {
        return Err(Error::DegreeOutOfRange { n: k_max, max: basis.degree() });
    }
    let eta = eta.unwrap_or_else(|| default_eta(spec));
    let radii = spec.critical_radii();
    if !(eta > radii.rho_v && eta <= 1.0) {
        return Err(Error::RadiusOutOfRange { r: eta, lo: radii.rho_v, hi: 1.0 });
    }
    let v: Vec<C64> = outer_maclaurin(&spec.outer, k_max - n + 1);
    let alpha: Vec<C64> = (n..=k_max).map(|k| convolve(&basis.polys[k].coeffs, &v, n)).collect();

    let count = (k_max + 256).next_power_of_two().max(512);
    let rule = CircleRule::new(eta, count)?;
    // 1/v*(ζ) = conj(v(1/ζ̄))
    let inv_vstar: Vec<C64> = (0..count)
        .map(|l| spec.eval_outer(&rule.node(l).conj().inv()).map(|x| x.conj()))
        .collect::<Result<_>>()?;
    let mut contour = Vec::with_capacity(k_max - n + 1);
    let mut below_diagonal: f64 = 0.0;
    for k in 0..=k_max {
        let poly = &basis.polys[k];
        let mut l = 0;
        let conj_alpha = integrate_circle::<Error>(&rule, |z| {
            let val = z.powi(-(n as i32) - 1) * poly.eval(&z) * inv_vstar[l];
            l += 1;
            Ok(val)
        })?;
        if k < n {
            below_diagonal = below_diagonal.max(conj_alpha.norm());
        } else {
            contour.push(conj_alpha.conj());
        }
    }
    let path_gap = alpha.iter().zip(&contour).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok(AlphaTable { n, k_max, eta, alpha, contour, below_diagonal, path_gap })
}

fn convolve(p: &[C64], v: &[C64], n: usize) -> C64 {
    p.iter().enumerate().skip(n).filter_map(|(j, c)| v.get(j - n).map(|x| c.conj() * x)).sum()
}

/// Rows `α_{m,k}` for `n ≤ m ≤ n + J`, `m ≤ k ≤ K`, by convolution only.
#[derive(Clone, Debug)]
pub struct AlphaRows {
    pub n: usize,
    pub k_max: usize,
    rows: Vec<Vec<C64>>,
}

impl AlphaRows {
    pub fn build(spec: &WeightSpec, basis: &OrthoBasis, n: usize, rows: usize, k_max: usize) -> Result<Self> {
        if k_max > basis.degree() || n + rows > k_max + 1 {
            return Err(Error::DegreeOutOfRange { n: k_max, max: basis.degree() });
        }
        let v: Vec<C64> = outer_maclaurin(&spec.outer, k_max + 1);
        let rows = (n..n + rows)
            .map(|m| (m..=k_max).map(|k| convolve(&basis.polys[k].coeffs, &v, m)).collect())
            .collect();
        Ok(AlphaRows { n, k_max, rows })
    }

    /// `α_{m,k}` for `m ≥ n`, zero below the diagonal.
    pub fn get(&self, m: usize, k: usize) -> C64 {
        if k < m {
            return C64::new(0.0, 0.0);
        }
        self.rows[m - self.n][k - m]
    }
}

/// Coefficients `h(n,0..=J)` of `1 + H_n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HSeries {
    pub n: usize,
    pub h: Vec<C64>,
}

/// Runs the recursion
/// `h(n,m+1) = g(n,m,n+m+1)/α_{n+m+1,n+m+1}`,
/// `g(n,m+1,k) = g(n,m,k) − h(n,m+1) α_{n+m+1,k}`, from `g(n,0,k) = −α_{n,k}`.
pub fn hg_recursion(alpha: &AlphaRows, n: usize, jmax: usize) -> Result<HSeries> {
    if n != alpha.n || alpha.rows.len() < jmax + 1 || alpha.k_max < n + jmax + 1 {
        return Err(Error::Precondition(format!(
            "recursion to J = {jmax} needs α rows {n}..={} up to k = {}",
            n + jmax,
            n + jmax + 1
        )));
    }
    let k_max = alpha.k_max;
    // g[k − n − 1] holds g(n, m, k)
    let mut g: Vec<C64> = (n + 1..=k_max).map(|k| -alpha.get(n, k)).collect();
    let mut h = vec![C64::new(1.0, 0.0)];
    for m in 0..jmax {
        let row = n + m + 1;
        let diag = alpha.get(row, row);
        if !(diag.norm() > 1e-300) {
            return Err(Error::Precondition(format!("α_{{{row},{row}}} vanishes; the basis is corrupt")));
        }
        let next = g[m] / diag;
        for k in row + 1..=k_max {
            g[k - n - 1] -= next * alpha.get(row, k);
        }
        h.push(next);
    }
    Ok(HSeries { n, h })
}

/// Value of a truncated power series with its tail estimate.
#[derive(Clone, Copy, Debug)]
pub struct SeriesValue {
    pub value: C64,
    pub tail: f64,
    /// False when the last coefficients do not decay geometrically.
    pub certified: bool,
}

impl HSeries {
    /// `H_n(z) = Σ_{j≥1} h(n,j) z^j`.
    pub fn eval(&self, z: C64) -> SeriesValue {
        let value = self.h.iter().skip(1).rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c) * z;
        let sizes: Vec<f64> = self.h.iter().enumerate().skip(1).map(|(j, c)| c.norm() * z.norm().powi(j as i32)).collect();
        let tail = geometric_tail(&sizes, 4.0 * f64::EPSILON * value.norm().max(f64::MIN_POSITIVE));
        SeriesValue { value, tail, certified: tail.is_finite() }
    }

    pub fn jmax(&self) -> usize {
        self.h.len() - 1
    }
}

/// `H_n(z)` with its tail estimate.
pub fn eval_hn(hs: &HSeries, z: C64) -> SeriesValue {
    hs.eval(z)
}

/// Node count for a contour of radius `r` around `z`, resolving `ζ^{degree}`
/// and the inner singularities to double precision.
pub fn contour_count(spec: &WeightSpec, degree: usize, r: f64, z: C64) -> usize {
    let radii = spec.critical_radii();
    let mut inner = z.norm().max(radii.rho_w);
    for s in &spec.singularities {
        if s.a.norm() < r {
            inner = inner.max(s.a.norm());
        }
    }
    let ratio = (inner / r).max(1e-3);
    let resolve = (40.0 / -ratio.ln()).ceil() as usize + 32;
    (8 * (degree + 16)).max(resolve).next_power_of_two()
}

fn check_contour(spec: &WeightSpec, r: f64, z: C64) -> Result<()> {
    let rho_w = spec.critical_radii().rho_w;
    if !(r > rho_w && r < 1.0) {
        return Err(Error::RadiusOutOfRange { r, lo: rho_w, hi: 1.0 });
    }
    if !(z.norm() < r) {
        return Err(Error::Domain { what: "contour representation", z, reason: format!("needs |z| < r = {r}") });
    }
    Ok(())
}

/// `(1/2πi v(z)) ∮_{|ζ|=r} (vv*)(ζ) L(z,ζ) ζ^{n+1} φ(ζ) dζ`, rotating the nodes
/// by half a step if one lands on a pole.
#[allow(clippy::too_many_arguments)]
fn contour_integral(
    spec: &WeightSpec,
    kernel: &KernelL,
    n: usize,
    r: f64,
    z: C64,
    degree: usize,
    min_nodes: usize,
    phi: impl Fn(C64) -> C64,
) -> Result<C64> {
    check_contour(spec, r, z)?;
    let mut rule = CircleRule::new(r, contour_count(spec, degree, r, z).max(min_nodes))?;
    let poles: Vec<C64> = spec.singularities.iter().map(|s| s.a).collect();
    let gap = 1e-9 * r;
    if poles.iter().any(|&a| rule.clearance(a) < gap) {
        rule = rule.rotated();
        if poles.iter().any(|&a| rule.clearance(a) < gap) {
            return Err(Error::Pole { what: "contour node on a singular point", z: poles[0] });
        }
    }
    let total = integrate_circle::<Error>(&rule, |zeta| {
        let vv = spec.eval_outer(&zeta)? * spec.eval_vstar(&zeta)?;
        Ok(vv * kernel.eval(z, zeta)? * zeta.powu(n as u32 + 1) * phi(zeta))
    })?;
    Ok(total / spec.eval_outer(&z)?)
}

/// `Q_n(z)`; independent of `r` in `(ρ_w, 1)` with `|z| < r`.
pub fn qn_eval(spec: &WeightSpec, n: usize, r: f64, z: C64, kernel: &KernelL) -> Result<C64> {
    contour_integral(spec, kernel, n, r, z, n, 0, |_| C64::new(1.0, 0.0))
}

/// Right-hand side of the integral representation, approximating `v(0)γ_n p_n(z)`.
/// Without `hs` it is the `H_n ≡ 0` truncation, i.e. `Q_n(z)`.
pub fn theorem1_eval(spec: &WeightSpec, n: usize, r: f64, z: C64, hs: Option<&HSeries>, kernel: &KernelL) -> Result<C64> {
    theorem1_eval_with_nodes(spec, n, r, z, hs, kernel, 0)
}

/// [`theorem1_eval`] with at least `min_nodes` contour nodes.
pub fn theorem1_eval_with_nodes(
    spec: &WeightSpec,
    n: usize,
    r: f64,
    z: C64,
    hs: Option<&HSeries>,
    kernel: &KernelL,
    min_nodes: usize,
) -> Result<C64> {
    match hs {
        None => contour_integral(spec, kernel, n, r, z, n, min_nodes, |_| C64::new(1.0, 0.0)),
        Some(hs) => {
            if hs.n != n {
                return Err(Error::Precondition(format!("H-series is for degree {}, not {n}", hs.n)));
            }
            contour_integral(spec, kernel, n, r, z, n + hs.jmax(), min_nodes, |zeta| 1.0 + hs.eval(zeta).value)
        }
    }
}

/// `H_n` from a basis: `α` rows `n..=n+J` and the recursion with `J = jmax`.
pub fn h_series(spec: &WeightSpec, basis: &OrthoBasis, n: usize, jmax: usize) -> Result<HSeries> {
    let k_max = n + jmax + 1;
    let rows = AlphaRows::build(spec, basis, n, jmax + 1, k_max)?;
    hg_recursion(&rows, n, jmax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthosystem::bergman_orthonormalize;
    use crate::quadrature::{DiskRule, QuadOrders};
    use crate::weight::{BlaschkeSingularity, OuterPart};

    fn poly2() -> WeightSpec {
        WeightSpec::new(OuterPart::PolyZerosOutside { factors: vec![(C64::new(0.5, 0.0), 2)], scale: 1.0 }, vec![]).unwrap()
    }

    fn basis(spec: &WeightSpec, n: usize) -> OrthoBasis {
        let rule = DiskRule::build(spec, QuadOrders::for_degree(n)).unwrap();
        bergman_orthonormalize(spec, n, &rule).unwrap()
    }

    #[test]
    fn unit_weight_alphas_are_diagonal() {
        let spec = WeightSpec::unit();
        let b = basis(&spec, 24);
        let t = alpha_table(&spec, &b, 8, 24, Some(0.5)).unwrap();
        assert!((t.get(8) - 3.0).norm() < 1e-13);
        assert!((9..=24).all(|k| t.get(k).norm() < 1e-13));
        assert!(t.below_diagonal < 1e-10 && t.path_gap < 1e-10);
        let hs = h_series(&spec, &b, 8, 12).unwrap();
        assert!(hs.h[1..].iter().all(|h| h.norm() < 1e-13));
    }

    #[test]
    fn alpha_structure_on_weighted_spec() {
        let spec = WeightSpec::new(
            OuterPart::PowerProduct { factors: vec![(C64::new(0.3, 0.3), 0.5)], scale: 1.0 },
            vec![BlaschkeSingularity::new(C64::new(0.5, 0.0), 1.0)],
        )
        .unwrap();
        let b = basis(&spec, 48);
        let c0 = spec.critical_radii().c0;
        for n in [8, 16] {
            let t = alpha_table(&spec, &b, n, 48, None).unwrap();
            assert!(t.below_diagonal < 1e-8);
            assert!((t.get(n).re * c0 / b.gammas[n] - 1.0).abs() < 1e-9);
            assert!(t.get(n).im.abs() < 1e-12);
            assert!(t.path_gap < 1e-9);
            assert!(t.alpha.iter().all(|a| a.norm() < 2.0 * b.gammas[48]));
        }
    }

    #[test]
    fn first_recursion_step() {
        let spec = poly2();
        let b = basis(&spec, 40);
        let rows = AlphaRows::build(&spec, &b, 10, 4, 20).unwrap();
        let hs = hg_recursion(&rows, 10, 3).unwrap();
        assert_eq!(hs.h[0], C64::new(1.0, 0.0));
        let expect = -rows.get(10, 11) / rows.get(11, 11);
        assert!((hs.h[1] - expect).norm() < 1e-15);
        assert_eq!(hs.eval(C64::new(0.0, 0.0)).value, C64::new(0.0, 0.0));
        assert!(hg_recursion(&rows, 10, 10).is_err());
    }

    #[test]
    fn unit_weight_q_is_monomial() {
        let spec = WeightSpec::unit();
        let k = KernelL::new(&spec, 1e-12).unwrap();
        let z = C64::new(0.3, -0.4);
        for n in [0, 5, 17] {
            let q = qn_eval(&spec, n, 0.7, z, &k).unwrap();
            let expect = (n as f64 + 1.0) * z.powu(n as u32);
            assert!((q - expect).norm() < 1e-13 * expect.norm().max(1.0));
        }
        assert!(qn_eval(&spec, 3, 0.2, z, &k).is_err());
        assert!(qn_eval(&spec, 3, 1.2, z, &k).is_err());
    }

    #[test]
    fn radius_independence() {
        let spec = WeightSpec::new(
            OuterPart::PolyZerosOutside { factors: vec![(C64::new(0.5, 0.0), 1)], scale: 1.0 },
            vec![BlaschkeSingularity::new(C64::new(0.3, 0.2), 1.0), BlaschkeSingularity::new(C64::new(-0.4, 0.0), 2.0)],
        )
        .unwrap();
        let k = KernelL::new(&spec, 1e-13).unwrap();
        let z = C64::new(0.1, 0.45);
        let a = qn_eval(&spec, 12, 0.6, z, &k).unwrap();
        for r in [0.75, 0.9] {
            let b = qn_eval(&spec, 12, r, z, &k).unwrap();
            assert!((a - b).norm() < 1e-9 * a.norm(), "r={r}: {a} vs {b}");
        }
    }

    #[test]
    fn representation_matches_oracle() {
        let spec = poly2();
        let b = basis(&spec, 32 + 64 + 1);
        let n = 32;
        let hs = h_series(&spec, &b, n, 64).unwrap();
        let kernel = KernelL::new(&spec, 1e-12).unwrap();
        let z = C64::new(0.2, 0.0);
        // v(0) = 1
        let oracle = b.gammas[n] * b.polys[n].eval(&z);
        let rep = theorem1_eval(&spec, n, 0.6, z, Some(&hs), &kernel).unwrap();
        assert!(((rep - oracle) / oracle).norm() < 1e-6, "{rep} vs {oracle}");
        let rough = theorem1_eval(&spec, n, 0.6, z, None, &kernel).unwrap();
        assert!(((rough - oracle) / oracle).norm() > 1e-6);
    }
}
