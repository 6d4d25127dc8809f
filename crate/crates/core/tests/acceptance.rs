//! Acceptance run: one pass/fail line per criterion, nonzero exit if any fails.

use std::path::Path;
use std::time::{Duration, Instant};

use bergman::asymptotics::{
    alpha_decay_report, alpha_structure_report, branch_ratio_report, bs_zero_report, disk_grid, exp_identity_report,
    faber_norm_report, kernel_report, rk0_point_report, sample_points, strong_asymptotics_report, theorem1_report,
    ConvergenceReport, TheoremOptions,
};
use bergman::kernel::KernelL;
use bergman::orthosystem::{orthonormalize, OrthoBasis};
use bergman::quadrature::{DiskRule, QuadOrders};
use bergman::representation::{h_series, theorem1_eval};
use bergman::weight::WeightConfig;
use bergman::{Hp, WeightSpec, C64};

type Outcome = (bool, String);

fn spec(json: &str) -> WeightSpec {
    WeightSpec::from_json(json).expect("valid weight")
}

fn poly2() -> WeightSpec {
    spec(r#"{"outer":{"kind":"poly","factors":[[0.5,0,2]]}}"#)
}

fn exp_z() -> WeightSpec {
    spec(r#"{"outer":{"kind":"exp","coeffs":[[0,0],[1,0]]}}"#)
}

fn blaschke1() -> WeightSpec {
    spec(r#"{"outer":{"kind":"poly"},"singularities":[[0.5,0,1]]}"#)
}

fn two_point() -> WeightSpec {
    spec(r#"{"outer":{"kind":"poly"},"singularities":[[0.5,0,1],[-0.2,0.4,2]]}"#)
}

fn rule(spec: &WeightSpec, n: usize) -> DiskRule {
    DiskRule::build(spec, QuadOrders::for_degree(n)).expect("rule")
}

fn basis(spec: &WeightSpec, n: usize) -> OrthoBasis {
    orthonormalize(spec, n, &rule(spec, n)).expect("basis")
}

fn hp_basis(spec: &WeightSpec, n: usize) -> OrthoBasis<Hp> {
    let rule = DiskRule::<Hp>::build(spec, QuadOrders::for_degree(n)).expect("rule");
    orthonormalize(spec, n, &rule).expect("basis")
}

/// Verdict of selected series of a report; all series when `labels` is empty.
fn judge(name: &str, rep: &bergman::Result<ConvergenceReport>, labels: &[&str]) -> Outcome {
    let rep = match rep {
        Ok(r) => r,
        Err(e) => return (false, format!("{name}: {e}")),
    };
    let mut failures = Vec::new();
    let mut worst = Vec::new();
    for s in &rep.series {
        if !labels.is_empty() && !labels.contains(&s.label.as_str()) {
            continue;
        }
        let rows = rep.series_rows(&s.label);
        let peak = rows.iter().map(|r| r.scaled_error).fold(0.0, f64::max);
        worst.push(format!("{}={peak:.2e}", s.label));
        if let Some(reason) = s.criterion.judge(&rows) {
            failures.push(format!("{}: {reason}", s.label));
        }
    }
    if worst.is_empty() {
        return (false, format!("{name}: no series"));
    }
    if failures.is_empty() {
        (true, format!("{name} [{}]", worst.join(" ")))
    } else {
        (false, format!("{name}: {}", failures.join("; ")))
    }
}

fn combine(parts: Vec<Outcome>) -> Outcome {
    let ok = parts.iter().all(|p| p.0);
    (ok, parts.into_iter().map(|p| p.1).collect::<Vec<_>>().join(" | "))
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let (ok, detail) = f();
    let elapsed = start.elapsed();
    match limit {
        Some(l) if elapsed > l => (false, format!("{detail}; took {elapsed:.1?}, limit {l:?}")),
        _ => (ok, format!("{detail}; {elapsed:.1?}")),
    }
}

fn unit_exactness() -> Outcome {
    let spec = WeightSpec::unit();
    let b = basis(&spec, 121);
    let mut coeff_err: f64 = 0.0;
    for n in 0..=40 {
        for (j, c) in b.polys[n].coeffs.iter().enumerate() {
            let expect = if j == n { ((n + 1) as f64).sqrt() } else { 0.0 };
            coeff_err = coeff_err.max((c - expect).norm());
        }
    }
    let kernel = KernelL::new(&spec, 1e-14).expect("kernel");
    let points = sample_points(50, 0.0, 0.7, 0x5eed);
    let mut rel_err: f64 = 0.0;
    for n in 0..=40 {
        let hs = h_series(&spec, &b, n, 2 * n).expect("H_n");
        for z in &points {
            // keep the contour close to z so that (n+1)z^n is resolved in relative terms
            let r = (1.25 * z.norm()).min(0.95);
            let exact = (n + 1) as f64 * z.powu(n as u32);
            match theorem1_eval(&spec, n, r, *z, Some(&hs), &kernel) {
                Ok(v) => rel_err = rel_err.max((v - exact).norm() / exact.norm()),
                Err(e) => return (false, format!("n={n} z={z}: {e}")),
            }
        }
    }
    let ok = coeff_err < 1e-10 && rel_err < 1e-10;
    (ok, format!("coefficients {coeff_err:.2e}, representation relative {rel_err:.2e} (tol 1e-10)"))
}

fn gamma_rate(bases: &[(&str, &WeightSpec, &OrthoBasis)]) -> Outcome {
    let ns = [16, 32, 64, 128, 256];
    combine(
        bases
            .iter()
            .take(2)
            .map(|(name, s, b)| judge(name, &strong_asymptotics_report(s, *b, &ns, 0.95), &["gamma"]))
            .collect(),
    )
}

fn strong(bases: &[(&str, &WeightSpec, &OrthoBasis)]) -> Outcome {
    let ns = [16, 32, 64, 128, 256];
    combine(bases.iter().map(|(name, s, b)| judge(name, &strong_asymptotics_report(s, *b, &ns, 0.95), &["sup"])).collect())
}

fn alpha_structure(configs: &Path) -> Outcome {
    let mut entries: Vec<_> = std::fs::read_dir(configs).expect("configs dir").map(|e| e.unwrap().path()).collect();
    entries.sort();
    let mut parts = Vec::new();
    for path in entries {
        let text = std::fs::read_to_string(&path).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let weight: WeightConfig = serde_json::from_value(value["weight"].clone()).unwrap();
        let s = weight.to_spec().unwrap();
        let b = basis(&s, 64);
        let name = path.file_stem().unwrap().to_string_lossy().to_string();
        let rep = alpha_structure_report(&s, &b, &[8, 16, 32], 64, None, 1e-8);
        parts.push(judge(&name, &rep, &["diagonal", "triangular", "paths"]));
    }
    combine(parts)
}

fn alpha_decay(b1: &OrthoBasis) -> Outcome {
    judge("blaschke1", &alpha_decay_report(&blaschke1(), b1, &[8, 16, 32], 32), &[])
}

fn faber(specs: &[(&str, &WeightSpec)]) -> Outcome {
    let ns = [16, 32, 64, 128, 256];
    combine(specs.iter().map(|(name, s)| judge(name, &faber_norm_report(s, &rule(s, 256), &ns), &[])).collect())
}

fn representation() -> Outcome {
    let mut parts = Vec::new();
    for (name, s) in [("poly2", poly2()), ("blaschke1", blaschke1()), ("two_point", two_point())] {
        let b = basis(&s, 128);
        let kernel = match KernelL::new(&s, 1e-14) {
            Ok(k) => k,
            Err(e) => return (false, format!("{name}: {e}")),
        };
        let mut full = TheoremOptions::new(0.82, vec![8, 16, 24, 32, 40], vec![], 1e-6);
        full.points = sample_points(20, 0.65, 0.78, 0x7431);
        parts.push(judge(&format!("{name} full"), &theorem1_report(&s, &b, &kernel, &full), &[]));
        let truncated = TheoremOptions::new(0.96, vec![], vec![16, 32, 64, 128], 1e-6);
        parts.push(judge(&format!("{name} truncated"), &theorem1_report(&s, &b, &kernel, &truncated), &[]));
    }
    combine(parts)
}

fn exp_identity() -> Outcome {
    let s = exp_z();
    let b = basis(&s, 24);
    judge("exp", &exp_identity_report(&s, &b, 24, 512, &disk_grid(10, 10), 1e-7), &[])
}

fn bs_zeros() -> Outcome {
    let s = WeightSpec::bernstein_szego(&[(C64::new(0.5, 0.0), 2.0, 2)]).unwrap();
    judge("bs", &bs_zero_report(&s, &hp_basis(&s, 256), &[32, 64, 128, 256]), &[])
}

fn rk0() -> Outcome {
    let s = spec(r#"{"outer":{"kind":"poly"},"singularities":[[0.6,0,2]]}"#);
    judge("rk0", &rk0_point_report(&s, &hp_basis(&s, 256), &[32, 64, 128, 256], C64::new(0.0, 0.0), 0.0), &["at_a0"])
}

fn branch() -> Outcome {
    let s = spec(r#"{"outer":{"kind":"power","factors":[[0.6,0,0.5]]}}"#);
    judge("branch", &branch_ratio_report(&s, &hp_basis(&s, 256), &[32, 64, 128, 256], C64::new(0.0, 0.0), 0.05), &[])
}

fn kernel() -> Outcome {
    let zs = [C64::new(0.0, 0.0), C64::new(0.4, 0.1), C64::new(-0.3, 0.2), C64::new(0.0, 0.6)];
    let zetas = [C64::new(2.0, 1.0), C64::new(-1.5, 1.5), C64::new(1.2, 0.0), C64::new(0.0, -1.1)];
    let pairs: Vec<(C64, C64)> = zs.iter().flat_map(|z| zetas.iter().map(move |w| (*z, *w))).collect();
    combine(vec![
        judge("s=1", &kernel_report(&blaschke1(), 1e-14, 48, &pairs), &[]),
        judge("s=2", &kernel_report(&two_point(), 1e-14, 48, &pairs), &[]),
    ])
}

fn main() {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let (p2, ex, b1) = (poly2(), exp_z(), blaschke1());
    let (bp2, bex, bb1) = std::thread::scope(|s| {
        let a = s.spawn(|| basis(&p2, 256));
        let b = s.spawn(|| basis(&ex, 256));
        let c = s.spawn(|| basis(&b1, 256));
        (a.join().unwrap(), b.join().unwrap(), c.join().unwrap())
    });
    let bases = [("poly2", &p2, &bp2), ("exp", &ex, &bex), ("blaschke1", &b1, &bb1)];

    type Check<'a> = (&'static str, Box<dyn FnOnce() -> Outcome + Send + 'a>);
    let checks: Vec<Check> = vec![
        ("unit-weight exactness", Box::new(|| timed(Some(Duration::from_secs(30)), unit_exactness))),
        ("gamma_n rate", Box::new(|| timed(None, || gamma_rate(&bases)))),
        ("strong asymptotics", Box::new(|| timed(None, || strong(&bases)))),
        ("alpha structure on shipped specs", Box::new(|| timed(None, || alpha_structure(&configs)))),
        ("alpha decay envelope", Box::new(|| timed(None, || alpha_decay(&bb1)))),
        ("Faber norm rate", Box::new(|| timed(None, || faber(&[("poly2", &p2), ("exp", &ex)])))),
        ("representation fidelity", Box::new(|| timed(None, representation))),
        ("exponential identity", Box::new(|| timed(Some(Duration::from_secs(120)), exp_identity))),
        ("zero drift near a singularity", Box::new(|| timed(None, bs_zeros))),
        ("value at an even singularity", Box::new(|| timed(None, rk0))),
        ("branch-point formula", Box::new(|| timed(None, branch))),
        ("kernel consistency", Box::new(|| timed(None, kernel))),
    ];
    let names: Vec<&str> = checks.iter().map(|c| c.0).collect();
    let mut checks = checks.into_iter();
    // the runtime bound of the first criterion is measured without contention
    let first = checks.next().map(|(_, f)| f()).into_iter();
    let results: Vec<Outcome> = first
        .chain(std::thread::scope(|s| {
            let handles: Vec<_> = checks.map(|(_, f)| s.spawn(f)).collect();
            handles.into_iter().map(|h| h.join().unwrap_or_else(|_| (false, "panicked".into()))).collect::<Vec<_>>()
        }))
        .collect();
    let mut failed = 0;
    for (i, (name, (ok, detail))) in names.iter().zip(&results).enumerate() {
        println!("criterion {:>2} {:<34} {}  {detail}", i + 1, name, if *ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    }
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
