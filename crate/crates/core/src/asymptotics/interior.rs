//! Validators of the interior behaviour: zero drift, values at singular points,
//! the branch-point and rational residue expansions, and the growth rate `τ_ζ`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::orthosystem::Oracle;
use crate::scalar::C64;
use crate::series::{binomial, mul};
use crate::weight::{CriticalRadii, OuterPart, WeightSpec};

use super::report::{ConvergenceReport, Criterion};

/// Contraction demanded of the final Newton increments.
const NEWTON_CONTRACTION: f64 = 4.0;

/// Degree of the companion-matrix cross-check. At much larger degrees the
/// `n − d` zeros clustered at the origin make the double-precision eigenproblem
/// ill-conditioned (perturbation radius about `u^{1/(n−d)}`).
pub const COMPANION_DEGREE: usize = 64;

/// Adds a note when an observed value is within a factor 1000 of the oracle's rounding level.
fn precision_note(rep: &mut ConvergenceReport, basis: &dyn Oracle, n: usize, z: C64, value: C64) {
    let bound = basis.eval_bound(n, z);
    if !(value.norm() > 1e3 * bound) {
        rep.note(format!("n = {n}, z = {z}: |p_n| = {:e} is near the rounding level {bound:e}", value.norm()));
    }
}

fn check_degrees(n_list: &[usize], available: usize) -> Result<()> {
    match n_list.iter().find(|&&n| n > available) {
        Some(&n) => Err(Error::DegreeOutOfRange { n, max: available }),
        None => Ok(()),
    }
}

/// Zero of `p_n` attracted to each `a_j` against `a_j − a_j(m_j + r_j)/(2n)`,
/// and `γ_n²` against `(n + 1 − d)(1 + Σ(m_k + r_k)/(2n))`.
pub fn bs_zero_report(spec: &WeightSpec, basis: &dyn Oracle, n_list: &[usize]) -> Result<ConvergenceReport> {
    let params = spec
        .bernstein_szego_parameters()
        .ok_or_else(|| Error::Precondition("zero drift needs v = ∏(1 − āz)^{−r/2} with even positive r".into()))?;
    check_degrees(n_list, basis.degree())?;
    let d: f64 = params.iter().map(|p| p.2 as f64).sum::<f64>() / 2.0;
    let drift_sum: f64 = params.iter().map(|&(_, m, r)| m + r as f64).sum();
    if let Some(&n) = n_list.iter().find(|&&n| (n as f64) < d.max(1.0)) {
        return Err(Error::Precondition(format!("zero drift needs n ≥ d = {d}, got {n}")));
    }

    let mut rep = ConvergenceReport::new("bs_zero");
    let labels: Vec<String> = (0..params.len()).map(|j| format!("zero{j}")).collect();
    for label in &labels {
        rep.series(label.clone(), Criterion::bounded());
    }
    rep.series("gamma2", Criterion::bounded());
    rep.series("newton", Criterion::Below { threshold: 1.0 });
    rep.series("companion", Criterion::Below { threshold: 1e-10 });

    for &n in n_list {
        let nf = n as f64;
        let mut contraction = f64::INFINITY;
        for (j, &(a, m, r)) in params.iter().enumerate() {
            let isolation = params
                .iter()
                .filter(|p| (p.0 - a).norm() > 0.0)
                .map(|p| (p.0 - a).norm())
                .fold(a.norm(), f64::min);
            let predicted = a - a * (m + r as f64) / (2.0 * nf);
            let (zero, steps) = basis.polish_zero(n, predicted);
            if !((zero - a).norm() < isolation / 2.0) || !zero.re.is_finite() {
                return Err(Error::ZeroTracking { a, reason: format!("Newton from {predicted} ended at {zero} for n = {n}") });
            }
            if steps.len() >= 2 {
                let last = steps[steps.len() - 1];
                let prev = steps[steps.len() - 2];
                contraction = contraction.min(if last == 0.0 { f64::INFINITY } else { prev / last });
            }
            precision_note(&mut rep, basis, n, a, basis.eval(n, a));
            rep.push(&labels[j], n, zero.re, predicted.re, nf * nf * (zero - predicted).norm());
            if n == COMPANION_DEGREE {
                let roots = basis.poly_f64(n).roots();
                let gap = roots.iter().map(|x| (x - zero).norm()).fold(f64::INFINITY, f64::min);
                rep.push("companion", n, gap, 0.0, gap);
            }
        }
        let scaled = if contraction.is_infinite() { 0.0 } else { NEWTON_CONTRACTION / contraction };
        rep.push("newton", n, contraction.min(f64::MAX), NEWTON_CONTRACTION, scaled);
        let g2 = basis.gamma(n).powi(2);
        let ratio = g2 / (nf + 1.0 - d);
        let predicted = 1.0 + drift_sum / (2.0 * nf);
        rep.push("gamma2", n, ratio, predicted, nf * (ratio - predicted).abs());
    }
    rep.note(format!("d = {d}; companion roots from the double-rounded coefficients at n = {COMPANION_DEGREE}"));
    Ok(rep.finish())
}

/// Value of `γ_n⁻¹p_n` at the singular points of largest modulus against
/// `(1 + m_j/2)a_j^n`, and the interior two-term expansion of `γ_n p_n(z)`.
pub fn rk0_point_report(spec: &WeightSpec, basis: &dyn Oracle, n_list: &[usize], z: C64, j_constant: f64) -> Result<ConvergenceReport> {
    if !spec.outer.is_unit() {
        return Err(Error::Precondition("singular-point values need v ≡ 1".into()));
    }
    if spec.s() == 0 || spec.s() > 2 {
        return Err(Error::UnsupportedSingularityCount(spec.s()));
    }
    check_degrees(n_list, basis.degree())?;
    let rho_a = spec.critical_radii().rho_a;
    if !(z.norm() < rho_a) {
        return Err(Error::Domain { what: "interior expansion", z, reason: format!("needs |z| < ρ_a = {rho_a}") });
    }
    if rho_a == 0.0 {
        return Err(Error::Precondition("singular-point values need ρ_a > 0".into()));
    }
    let outer_most: Vec<_> = spec.singularities.iter().filter(|s| s.a.norm() >= rho_a * (1.0 - 1e-14)).collect();
    let (_, qstar_z) = spec.eval_q_qstar(&z);

    let mut rep = ConvergenceReport::new("rk0");
    let labels: Vec<String> = (0..outer_most.len()).map(|j| format!("at_a{j}")).collect();
    for label in &labels {
        rep.series(label.clone(), Criterion::bounded());
    }
    rep.series("interior", Criterion::bounded());
    for &n in n_list {
        let nf = n as f64;
        for (label, s) in labels.iter().zip(&outer_most) {
            precision_note(&mut rep, basis, n, s.a, basis.eval(n, s.a));
            let observed = basis.eval(n, s.a) / basis.gamma(n);
            let predicted = (1.0 + s.m / 2.0) * s.a.powu(n as u32);
            rep.push(label, n, observed.norm(), predicted.norm(), nf * (observed / predicted - 1.0).norm());
        }
        let mut predicted = C64::new(0.0, 0.0);
        for s in &outer_most {
            let q_prime: C64 = spec.singularities.iter().filter(|t| t.a != s.a).map(|t| s.a - t.a).product();
            let term = s.m / 2.0 * (1.0 - s.a.norm_sqr()) / ((s.a - z) * (1.0 - z * s.a.conj()))
                + j_constant / (qstar_z * q_prime);
            predicted += s.a.powu(n as u32 + 1) * term;
        }
        precision_note(&mut rep, basis, n, z, basis.eval(n, z));
        let observed = basis.gamma(n) * basis.eval(n, z);
        let scale = rho_a.powi(n as i32);
        rep.push("interior", n, observed.norm(), predicted.norm(), nf * (observed - predicted).norm() / scale);
    }
    rep.note(format!("interior point z = {z}, J = {j_constant}"));
    Ok(rep.finish())
}

/// `(1−|b|²)^r b^{n+2} / ((1−b̄z)^r (b−z)²) · ∏_{i=0}^{n+1} (r+i)/(i+1)`, the
/// product taken in log space.
pub fn branch_rhs(b: C64, r: f64, z: C64, n: usize) -> C64 {
    let log_ratio: f64 = (0..=n + 1).map(|i| ((r + i as f64) / (i as f64 + 1.0)).ln()).sum();
    let prefactor = (1.0 - b.norm_sqr()).powf(r) / ((1.0 - b.conj() * z).powf(r) * (b - z) * (b - z));
    prefactor * (b.ln() * (n as f64 + 2.0) + log_ratio).exp()
}

/// `|γ_n p_n(z)/RHS_n(z) − 1|` for `v = (1 − b̄z)^r`, expected to decrease below `final_max`.
pub fn branch_ratio_report(spec: &WeightSpec, basis: &dyn Oracle, n_list: &[usize], z: C64, final_max: f64) -> Result<ConvergenceReport> {
    let (b, r) = match &spec.outer {
        OuterPart::PowerProduct { factors, scale } if factors.len() == 1 && *scale == 1.0 && spec.s() == 0 => factors[0],
        _ => return Err(Error::Precondition("branch ratio needs v = (1 − b̄z)^r with unit scale and no singular points".into())),
    };
    if r.fract() == 0.0 {
        return Err(Error::Precondition(format!("branch ratio needs a non-integer exponent, got {r}")));
    }
    if !(z.norm() < b.norm()) {
        return Err(Error::Domain { what: "branch ratio", z, reason: format!("needs |z| < |b| = {}", b.norm()) });
    }
    check_degrees(n_list, basis.degree())?;
    let mut rep = ConvergenceReport::new("branch");
    rep.series("ratio", Criterion::Decreasing { last: final_max });
    for &n in n_list {
        precision_note(&mut rep, basis, n, z, basis.eval(n, z));
        let observed = basis.gamma(n) * basis.eval(n, z);
        let predicted = branch_rhs(b, r, z, n);
        rep.push("ratio", n, observed.norm(), predicted.norm(), (observed / predicted - 1.0).norm());
    }
    if !(0.0 < r && r < 1.0) {
        rep.note("exponent outside (0, 1): formula compared against the oracle without the segment derivation");
    }
    Ok(rep.finish())
}

/// Coefficients of `(c + t)^p` in `t`, `len` terms, for integer `p ≥ 0`.
fn shifted_power(c: C64, p: usize, len: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(len);
    let mut binom = 1.0;
    for i in 0..len {
        if i > p {
            out.push(C64::new(0.0, 0.0));
            continue;
        }
        out.push(c.powu((p - i) as u32) * binom);
        binom *= (p - i) as f64 / (i as f64 + 1.0);
    }
    out
}

/// Coefficients of `(c + t)^e` in `t` for `c ≠ 0` and real `e`.
fn shifted_real_power(c: C64, e: f64, len: usize) -> Vec<C64> {
    let lead = if e.fract() == 0.0 { c.powi(e as i32) } else { c.powf(e) };
    binomial(&(-1.0 / c), e, len).into_iter().map(|x| x * lead).collect()
}

/// `Q_n(z)` for polynomial `v`, by residues of `(vv*)(ζ)ζ^{n+1}/(ζ − z)²` at `z`
/// and at the poles `b_k` of `v*`.
pub fn rational_residue_value(spec: &WeightSpec, n: usize, z: C64) -> Result<C64> {
    let OuterPart::PolyZerosOutside { factors, .. } = &spec.outer else {
        return Err(Error::Precondition("residue expansion needs a polynomial v".into()));
    };
    if spec.s() != 0 {
        return Err(Error::Precondition("residue expansion needs a weight without singular points".into()));
    }
    let total_r: u32 = factors.iter().map(|f| f.1).sum();
    let power = n + 1 + total_r as usize;
    // (vv*)(ζ)ζ^{n+1} = ∏(1 − b̄_jζ)^{r_j} ζ^{n+1+R} ∏(ζ − b_j)^{−r_j}; expand at ζ = c + t.
    let expand = |c: C64, skip: Option<usize>, len: usize| -> Result<Vec<C64>> {
        let mut acc = shifted_power(c, power, len);
        for (j, &(b, r)) in factors.iter().enumerate() {
            let lin = 1.0 - b.conj() * c;
            let f: Vec<C64> = binomial(&(b.conj() / lin), r as f64, len).into_iter().map(|x| x * lin.powu(r)).collect();
            acc = mul(&acc, &f, len);
            if Some(j) != skip {
                if (c - b).norm() == 0.0 {
                    return Err(Error::Pole { what: "residue expansion", z: c });
                }
                acc = mul(&acc, &shifted_real_power(c - b, -(r as f64), len), len);
            }
        }
        Ok(acc)
    };
    let at_z = expand(z, None, 2)?;
    let mut total = at_z[1];
    for (k, &(b, r)) in factors.iter().enumerate() {
        let len = r as usize;
        if (b - z).norm() == 0.0 {
            return Err(Error::Pole { what: "residue expansion", z });
        }
        let g = mul(&expand(b, Some(k), len)?, &shifted_real_power(b - z, -2.0, len), len);
        total += g[len - 1];
    }
    Ok(total / spec.eval_outer(&z)?)
}

/// `n|v(0)γ_n p_n(z) − Q_n(z)|/|Q_n(z)|` with `Q_n` by residues.
pub fn rational_residue_report(spec: &WeightSpec, basis: &dyn Oracle, n_list: &[usize], z_samples: &[C64]) -> Result<ConvergenceReport> {
    check_degrees(n_list, basis.degree())?;
    let v0 = 1.0 / spec.critical_radii().c0;
    let mut rep = ConvergenceReport::new("rational");
    let labels: Vec<String> = (0..z_samples.len()).map(|i| format!("z{i}")).collect();
    for label in &labels {
        rep.series(label.clone(), Criterion::bounded());
    }
    for &n in n_list {
        for (label, z) in labels.iter().zip(z_samples) {
            precision_note(&mut rep, basis, n, *z, basis.eval(n, *z));
            let predicted = rational_residue_value(spec, n, *z)?;
            let observed = v0 * basis.gamma(n) * basis.eval(n, *z);
            rep.push(label, n, observed.norm(), predicted.norm(), n as f64 * (observed - predicted).norm() / predicted.norm());
        }
    }
    rep.note(format!("samples: {}", z_samples.iter().map(|z| z.to_string()).collect::<Vec<_>>().join(", ")));
    Ok(rep.finish())
}

/// Estimate of `limsup |p_n(ζ)|^{1/n}`.
#[derive(Clone, Debug, Serialize)]
pub struct TauEstimate {
    pub zeta: C64,
    /// Extrapolated rate.
    pub estimate: f64,
    /// `|p_N(ζ)|^{1/N}` at the largest degree, without extrapolation.
    pub raw: f64,
    /// `max(|ζ|, ρ_w)`.
    pub predicted: f64,
    pub deviation: f64,
    /// `ζ` sits on a singular point, where the rate may differ.
    pub exceptional: bool,
    /// Degrees used in the fit.
    pub degrees: Vec<usize>,
}

/// Fits `ln|p_n(ζ)| ≈ n ln τ + β ln n + c` over the top decile of degrees.
/// Fails when the values in that range are below the oracle's rounding level.
pub fn tau_estimate(basis: &dyn Oracle, zeta: C64, radii: &CriticalRadii, singular_points: &[C64]) -> Result<TauEstimate> {
    if !(zeta.norm() < 1.0) {
        return Err(Error::Domain { what: "tau estimate", z: zeta, reason: "needs |ζ| < 1".into() });
    }
    let top = basis.degree();
    let lo = (top * 9 / 10).min(top.saturating_sub(4)).max(1);
    let degrees: Vec<usize> = (lo..=top).collect();
    if degrees.len() < 4 {
        return Err(Error::Precondition(format!("tau estimate needs degree ≥ 5, got {top}")));
    }
    let mut rows = Vec::with_capacity(degrees.len());
    for &n in &degrees {
        let value = basis.eval(n, zeta).norm();
        if !(value > 16.0 * basis.eval_bound(n, zeta)) {
            return Err(Error::NotConverged(format!("|p_{n}({zeta})| is at rounding level; use a higher-precision basis")));
        }
        rows.push([n as f64, (n as f64).ln(), 1.0, value.ln()]);
    }
    let estimate = least_squares_rate(&rows).exp();
    let raw = rows.last().map_or(f64::NAN, |r| (r[3] / r[0]).exp());
    let predicted = zeta.norm().max(radii.rho_w);
    let exceptional = singular_points.iter().any(|a| (a - zeta).norm() < 1e-12);
    Ok(TauEstimate { zeta, estimate, raw, predicted, deviation: (estimate - predicted).abs(), exceptional, degrees })
}

/// Coefficient of the first column in the least-squares fit of the last column on the first three.
fn least_squares_rate(rows: &[[f64; 4]]) -> f64 {
    // centre the columns for conditioning
    let k = rows.len() as f64;
    let mean: Vec<f64> = (0..4).map(|c| rows.iter().map(|r| r[c]).sum::<f64>() / k).collect();
    let x: Vec<[f64; 2]> = rows.iter().map(|r| [r[0] - mean[0], r[1] - mean[1]]).collect();
    let y: Vec<f64> = rows.iter().map(|r| r[3] - mean[3]).collect();
    let m = nalgebra::Matrix2::new(
        x.iter().map(|r| r[0] * r[0]).sum(),
        x.iter().map(|r| r[0] * r[1]).sum(),
        x.iter().map(|r| r[0] * r[1]).sum(),
        x.iter().map(|r| r[1] * r[1]).sum(),
    );
    let rhs = nalgebra::Vector2::new(x.iter().zip(&y).map(|(r, y)| r[0] * y).sum(), x.iter().zip(&y).map(|(r, y)| r[1] * y).sum());
    m.lu().solve(&rhs).map_or(f64::NAN, |s| s[0])
}

/// `|τ̂_ζ − max(|ζ|, ρ_w)|` for each sample. Singular points are reported but
/// not judged; samples whose values sink below the rounding level are skipped.
pub fn tau_report(spec: &WeightSpec, basis: &dyn Oracle, zetas: &[C64], tol: f64) -> Result<ConvergenceReport> {
    let radii = spec.critical_radii();
    let points: Vec<C64> = spec.singularities.iter().map(|s| s.a).collect();
    let mut rep = ConvergenceReport::new("tau");
    for (i, zeta) in zetas.iter().enumerate() {
        let label = format!("zeta{i}");
        let est = match tau_estimate(basis, *zeta, &radii, &points) {
            Ok(est) => est,
            Err(Error::NotConverged(reason)) => {
                rep.note(format!("{label} = {zeta} skipped: {reason}"));
                continue;
            }
            Err(e) => return Err(e),
        };
        if est.exceptional {
            rep.note(format!("{label} = {zeta} is a singular point: estimate {:.6}, not judged", est.estimate));
            continue;
        }
        rep.series(label.clone(), Criterion::Below { threshold: tol });
        rep.push(&label, basis.degree(), est.estimate, est.predicted, est.deviation);
        rep.note(format!("{label} = {zeta}: raw rate {:.6} at n = {}", est.raw, basis.degree()));
    }
    let rep = rep.finish();
    Ok(if rep.series.is_empty() { ConvergenceReport { verdict: super::Verdict::Skipped("no sample above rounding level".into()), ..rep } } else { rep })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::Verdict;
    use crate::kernel::KernelL;
    use crate::orthosystem::{bergman_orthonormalize, orthonormalize, OrthoBasis};
    use crate::quadrature::{DiskRule, QuadOrders};
    use crate::representation::qn_eval;
    use crate::scalar::Hp;

    fn hp_basis(spec: &WeightSpec, n: usize) -> OrthoBasis<Hp> {
        let rule = DiskRule::<Hp>::build(spec, QuadOrders::for_degree(n)).unwrap();
        orthonormalize::<Hp>(spec, n, &rule).unwrap()
    }

    #[test]
    fn branch_gamma_ratio_product() {
        // r = 0.5, n = 4: 0.5·1.5·2.5·3.5·4.5·5.5/6!
        let direct = 0.5 * 1.5 * 2.5 * 3.5 * 4.5 * 5.5 / 720.0;
        let b = C64::new(0.6, 0.0);
        let pre = (1.0 - 0.36f64).powf(0.5) * b.powu(6) / (b * b);
        let rhs = branch_rhs(b, 0.5, C64::new(0.0, 0.0), 4);
        assert!((rhs / pre - direct).norm() < 1e-14);
    }

    #[test]
    fn residues_match_contour() {
        for js in [
            r#"{"outer":{"kind":"poly","factors":[[0.5,0,1]]}}"#,
            r#"{"outer":{"kind":"poly","factors":[[0.3,0.4,2],[-0.5,0,1]]}}"#,
        ] {
            let spec = WeightSpec::from_json(js).unwrap();
            let kernel = KernelL::new(&spec, 1e-14).unwrap();
            for z in [C64::new(0.6, 0.1), C64::new(-0.2, 0.7)] {
                let q = qn_eval(&spec, 12, 0.9, z, &kernel).unwrap();
                let res = rational_residue_value(&spec, 12, z).unwrap();
                assert!((q - res).norm() < 1e-11 * q.norm(), "{q} vs {res}");
            }
        }
    }

    #[test]
    fn residues_of_unit_weight() {
        let z = C64::new(0.3, -0.4);
        let q = rational_residue_value(&WeightSpec::unit(), 7, z).unwrap();
        assert!((q - 8.0 * z.powu(7)).norm() < 1e-15);
    }

    #[test]
    fn zero_drift_small_degrees() {
        let spec = WeightSpec::bernstein_szego(&[(C64::new(0.5, 0.0), 2.0, 2)]).unwrap();
        let b = hp_basis(&spec, 64);
        let rep = bs_zero_report(&spec, &b, &[16, 32, 64]).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{:?}", rep.reason);
        assert!(rep.series_rows("companion")[0].scaled_error < 1e-10);
        let zero = rep.series_rows("zero0");
        assert!(zero.iter().all(|r| r.scaled_error < 4.0));
    }

    #[test]
    fn rk0_values() {
        let spec = WeightSpec::from_json(r#"{"outer":{"kind":"poly"},"singularities":[[0.6,0,2]]}"#).unwrap();
        let b = hp_basis(&spec, 64);
        let rep = rk0_point_report(&spec, &b, &[16, 32, 64], C64::new(0.0, 0.0), 0.0).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{:?}", rep.reason);
        let non_unit = WeightSpec::from_json(r#"{"outer":{"kind":"poly","factors":[[0.5,0,1]]},"singularities":[[0.6,0,2]]}"#).unwrap();
        assert!(rk0_point_report(&non_unit, &b, &[16], C64::new(0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn tau_unit_weight() {
        let spec = WeightSpec::unit();
        let b = hp_basis(&spec, 80);
        let est = tau_estimate(&b, C64::new(0.4, 0.0), &spec.critical_radii(), &[]).unwrap();
        assert!(est.deviation < 1e-3, "{est:?}");
        // the double-precision basis hits rounding level at 0.4^80
        let rule = DiskRule::build(&spec, QuadOrders::for_degree(80)).unwrap();
        let f = bergman_orthonormalize(&spec, 80, &rule).unwrap();
        assert!(matches!(tau_estimate(&f, C64::new(0.4, 0.0), &spec.critical_radii(), &[]), Err(Error::NotConverged(_))));
    }
}
