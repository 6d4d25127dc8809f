//! Validators of the exterior asymptotics, the `α` coefficients, the integral
//! representation and the rational kernel.

use crate::error::{Error, Result};
use crate::faber::{faber_weighted_norm, laurent_coeffs};
use crate::kernel::{kh_origin, kh_series_reflected, KernelL};
use crate::orthosystem::{bergman_orthonormalize, Oracle, OrthoBasis};
use crate::quadrature::{DiskRule, QuadOrders};
use crate::representation::{alpha_paths, h_series, theorem1_eval_with_nodes, HSeries};
use crate::scalar::C64;
use crate::weight::WeightSpec;

use super::report::{ConvergenceReport, Criterion};

fn check_degrees(n_list: &[usize], available: usize) -> Result<()> {
    match n_list.iter().find(|&&n| n > available) {
        Some(&n) => Err(Error::DegreeOutOfRange { n, max: available }),
        None => Ok(()),
    }
}

fn check_positive(n_list: &[usize], what: &str) -> Result<()> {
    if n_list.contains(&0) {
        return Err(Error::Precondition(format!("{what} needs degrees n ≥ 1")));
    }
    Ok(())
}

/// `sup_{|z|=1} |p_n(z)/(√n z^n) − v*(z)|` scaled by `n`, plus the `z = ∞` row
/// `n|γ_n v(0)/√n − 1|`.
pub fn strong_asymptotics_report(spec: &WeightSpec, basis: &dyn Oracle, n_list: &[usize], r: f64) -> Result<ConvergenceReport> {
    let rho_w = spec.critical_radii().rho_w;
    if !(r > rho_w) {
        return Err(Error::RadiusOutOfRange { r, lo: rho_w, hi: f64::INFINITY });
    }
    check_degrees(n_list, basis.degree())?;
    check_positive(n_list, "strong asymptotics")?;
    let radius = r.max(1.0);
    let n_max = n_list.iter().copied().max().unwrap_or(0);
    let count = (4 * n_max + 64).next_power_of_two();
    let circle: Vec<C64> = (0..count).map(|l| C64::from_polar(radius, std::f64::consts::TAU * l as f64 / count as f64)).collect();
    let vstar: Vec<C64> = circle.iter().map(|z| spec.eval_vstar(z)).collect::<Result<_>>()?;
    let v0 = 1.0 / spec.critical_radii().c0;

    let mut rep = ConvergenceReport::new("strong");
    rep.series("sup", Criterion::bounded());
    rep.series("gamma", Criterion::bounded());
    for &n in n_list {
        let sqrt_n = (n as f64).sqrt();
        let sup = circle
            .iter()
            .zip(&vstar)
            .map(|(z, vs)| (basis.eval(n, *z) / (sqrt_n * z.powu(n as u32)) - vs).norm())
            .fold(0.0, f64::max);
        rep.push("sup", n, sup, 0.0, n as f64 * sup);
        let g = basis.gamma(n) * v0 / sqrt_n;
        rep.push("gamma", n, g, 1.0, n as f64 * (g - 1.0).abs());
    }
    rep.note(format!("sup over {count} points on |z| = {radius}"));
    Ok(rep.finish())
}

/// `n|n∫|F_n|²w dσ − 1|` and the log-log slope of the deviation.
pub fn faber_norm_report(spec: &WeightSpec, rule: &DiskRule, n_list: &[usize]) -> Result<ConvergenceReport> {
    check_positive(n_list, "Faber norms")?;
    let n_max = n_list.iter().copied().max().unwrap_or(0);
    let coeffs = laurent_coeffs(spec, n_max);
    let mut rep = ConvergenceReport::new("faber");
    rep.series("norm", Criterion::bounded());
    rep.series("decay", Criterion::LogSlope { lo: -1.4, hi: -0.6 });
    for &n in n_list {
        let scaled = n as f64 * faber_weighted_norm(spec, n, rule, &coeffs)?;
        let dev = (scaled - 1.0).abs();
        rep.push("norm", n, scaled, 1.0, n as f64 * dev);
        rep.push("decay", n, dev, 0.0, dev);
    }
    Ok(rep.finish())
}

/// Triangular structure, diagonal value, path agreement and uniform bound of `α_{n,k}`.
pub fn alpha_structure_report(
    spec: &WeightSpec,
    basis: &OrthoBasis,
    n_list: &[usize],
    k_max: usize,
    eta: Option<f64>,
    tol: f64,
) -> Result<ConvergenceReport> {
    check_degrees(&[k_max], basis.degree())?;
    let c0 = spec.critical_radii().c0;
    let mut rep = ConvergenceReport::new("alpha");
    rep.series("diagonal", Criterion::Below { threshold: tol });
    rep.series("triangular", Criterion::Below { threshold: tol });
    rep.series("paths", Criterion::Below { threshold: tol });
    rep.series("bound", Criterion::bounded());
    for &n in n_list {
        if n > k_max {
            return Err(Error::DegreeOutOfRange { n, max: k_max });
        }
        let t = alpha_paths(spec, basis, n, k_max, eta)?;
        let diag = t.contour[0] * c0 / basis.gammas[n];
        rep.push("diagonal", n, diag.re, 1.0, (diag - 1.0).norm());
        let size = t.alpha.iter().map(|a| a.norm()).fold(1.0, f64::max);
        rep.push("triangular", n, t.below_diagonal, 0.0, t.below_diagonal / size);
        rep.push("paths", n, t.path_gap, 0.0, t.path_gap / size);
        let off = t.alpha[1..].iter().map(|a| a.norm()).fold(0.0, f64::max);
        rep.push("bound", n, off, 0.0, off);
    }
    Ok(rep.finish())
}

/// `|α_{n,k}|√k / (η^{k−n} + ρ_a^{k−n})` for `k − n = 1..=span`, `η = (ρ_v + 1)/2`.
pub fn alpha_decay_report(spec: &WeightSpec, basis: &OrthoBasis, n_list: &[usize], span: usize) -> Result<ConvergenceReport> {
    let radii = spec.critical_radii();
    let eta = (radii.rho_v + 1.0) / 2.0;
    let mut rep = ConvergenceReport::new("alpha_decay");
    for &n in n_list {
        check_degrees(&[n + span], basis.degree())?;
        let label = format!("n={n}");
        rep.series(label.clone(), Criterion::bounded());
        let t = alpha_paths(spec, basis, n, n + span, None)?;
        for j in 1..=span {
            let k = n + j;
            let envelope = eta.powi(j as i32) + radii.rho_a.powi(j as i32);
            let a = t.get(k).norm();
            rep.push(&label, k, a, envelope, a * (k as f64).sqrt() / envelope);
        }
    }
    rep.note(format!("eta = {eta}, rho_a = {}", radii.rho_a));
    Ok(rep.finish())
}

/// Sampling and truncation choices for [`theorem1_report`].
#[derive(Clone, Debug)]
pub struct TheoremOptions {
    /// Contour radius in `(ρ_w, 1)`.
    pub r: f64,
    /// Evaluation points for the check with `H_n`, all with `|z| < r`.
    pub points: Vec<C64>,
    /// Evaluation points for the `H_n ≡ 0` truncation. Keep `|z|^n` well above
    /// the oracle's rounding level.
    pub points_q: Vec<C64>,
    /// Degrees checked with `H_n` included.
    pub with_h: Vec<usize>,
    /// Degrees checked with `H_n ≡ 0`.
    pub without_h: Vec<usize>,
    /// `J_max = jmax_factor · n`.
    pub jmax_factor: usize,
    /// Relative tolerance of the full representation.
    pub tol: f64,
    /// Lower bound on the contour node count; 0 keeps the automatic choice.
    pub min_nodes: usize,
}

impl TheoremOptions {
    /// 20 points with `0.74r ≤ |z| ≤ 0.95r` for the full check and 20 points on
    /// `|z| = 0.94r` for the truncation, `J_max = 2n`.
    pub fn new(r: f64, with_h: Vec<usize>, without_h: Vec<usize>, tol: f64) -> Self {
        TheoremOptions {
            r,
            points: super::sample_points(20, 0.74 * r, 0.95 * r, 0x7431),
            points_q: super::sample_points(20, 0.94 * r, 0.94 * r, 0x7432),
            with_h,
            without_h,
            jmax_factor: 2,
            tol,
            min_nodes: 0,
        }
    }
}

/// The integral representation against the oracle `v(0)γ_n p_n(z)`: relative
/// error with `H_n` (`with_h`) and `n ×` relative error of the `H_n ≡ 0` truncation (`q_only`).
pub fn theorem1_report(spec: &WeightSpec, basis: &OrthoBasis, kernel: &KernelL, opts: &TheoremOptions) -> Result<ConvergenceReport> {
    if opts.points.is_empty() || opts.points_q.is_empty() {
        return Err(Error::Precondition("theorem1 report needs evaluation points".into()));
    }
    let v0 = 1.0 / spec.critical_radii().c0;
    let worst = |n: usize, hs: Option<&HSeries>| -> Result<(f64, f64, f64)> {
        let mut out = (0.0, 0.0, -1.0);
        let points = if hs.is_some() { &opts.points } else { &opts.points_q };
        for z in points {
            let observed = v0 * basis.gammas[n] * basis.eval_poly(n, z)?;
            let predicted = theorem1_eval_with_nodes(spec, n, opts.r, *z, hs, kernel, opts.min_nodes)?;
            let rel = (observed - predicted).norm() / observed.norm();
            if !(rel <= out.2) {
                out = (observed.norm(), predicted.norm(), rel);
            }
        }
        Ok(out)
    };
    let mut rep = ConvergenceReport::new("theorem1");
    if !opts.with_h.is_empty() {
        rep.series("with_h", Criterion::Below { threshold: opts.tol });
    }
    if !opts.without_h.is_empty() {
        rep.series("q_only", Criterion::bounded());
    }
    for &n in &opts.with_h {
        let jmax = opts.jmax_factor * n.max(1);
        check_degrees(&[n + jmax + 1], basis.degree())?;
        let hs = h_series(spec, basis, n, jmax)?;
        let (o, p, rel) = worst(n, Some(&hs))?;
        rep.push("with_h", n, o, p, rel);
    }
    for &n in &opts.without_h {
        check_degrees(&[n], basis.degree())?;
        let (o, p, rel) = worst(n, None)?;
        rep.push("q_only", n, o, p, n as f64 * rel);
    }
    rep.note(format!(
        "r = {}, {} + {} points, J_max = {} n, min nodes {}",
        opts.r,
        opts.points.len(),
        opts.points_q.len(),
        opts.jmax_factor,
        opts.min_nodes
    ));
    Ok(rep.finish())
}

/// Structural `ζ²L(z, ζ)` against `K_h(z, 1/ζ̄)` summed over an orthonormal basis
/// for `h`, and stability of `J` under doubled quadrature orders.
pub fn kernel_report(spec: &WeightSpec, tol: f64, degree_h: usize, pairs: &[(C64, C64)]) -> Result<ConvergenceReport> {
    let kernel = KernelL::new(spec, tol)?;
    let h = spec.blaschke_part();
    let rule = DiskRule::build(&h, QuadOrders::for_degree(degree_h))?;
    let basis_h = bergman_orthonormalize(&h, degree_h, &rule)?;
    let mut rep = ConvergenceReport::new("kernel");
    rep.series("structural", Criterion::Below { threshold: 1e-7 });
    rep.series("j_stability", Criterion::Below { threshold: 1e-7 });
    let mut worst = (0.0, 0.0, -1.0);
    for &(z, zeta) in pairs {
        let series = kh_series_reflected(&basis_h, z, zeta);
        let structural = zeta * zeta * kernel.eval(z, zeta)?;
        let gap = (series - structural).norm();
        if !(gap <= worst.2) {
            worst = (series.norm(), structural.norm(), gap);
        }
    }
    rep.push("structural", degree_h, worst.0, worst.1, worst.2);
    if spec.s() == 2 {
        let base = kh_origin(spec, tol, None)?;
        let refined = KernelL::with_orders(spec, tol, Some(QuadOrders::for_degree(base.degree).doubled()))?;
        let gap = (kernel.j_constant - refined.j_constant).abs();
        rep.push("j_stability", base.degree, kernel.j_constant, refined.j_constant, gap);
    } else {
        rep.push("j_stability", 0, 0.0, 0.0, 0.0);
        rep.note("J vanishes identically for fewer than two singular points");
    }
    Ok(rep.finish())
}
