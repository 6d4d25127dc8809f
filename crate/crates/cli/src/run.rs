//! Builds the oracles once and runs every requested family.

use bergman::asymptotics::{
    alpha_decay_report, alpha_structure_report, bs_zero_report, disk_grid, exp_identity_report, faber_norm_report,
    kernel_report, rational_residue_report, rk0_point_report, strong_asymptotics_report, branch_ratio_report,
    tau_report, theorem1_report, ConvergenceReport, TheoremOptions, Verdict,
};
use bergman::kernel::KernelL;
use bergman::orthosystem::{orthonormalize, OrthoBasis, Oracle};
use bergman::quadrature::DiskRule;
use bergman::{Error, Hp, C64};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Family, Resolved, RunConfig};
use crate::error::CliError;

/// Points paired as `(z, ζ)` with `|z| < 1 < |ζ|` for the kernel family.
const KERNEL_PAIRS: [(f64, f64, f64, f64); 2] = [(0.4, 0.1, 2.0, 1.0), (-0.3, 0.2, -1.5, 1.5)];

/// Report of one family and, when it could not be computed, what broke.
#[derive(Clone, Debug)]
pub struct FamilyOutcome {
    pub family: Family,
    pub report: ConvergenceReport,
    /// `module::operation` of a numerical failure.
    pub failed_op: Option<&'static str>,
}

/// Everything a run produced.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub config: RunConfig,
    pub resolved: Resolved,
    pub families: Vec<FamilyOutcome>,
}

/// Per-family line of `summary.json`.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyVerdict {
    pub family: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Contents of `summary.json`.
#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub weight: bergman::weight::WeightConfig,
    pub nmax: usize,
    pub n_list: Vec<usize>,
    pub radius: f64,
    /// Working precision of the interior families.
    pub interior_precision: &'static str,
    pub all_pass: bool,
    pub families: Vec<FamilyVerdict>,
}

impl RunOutcome {
    /// 3 after a numerical failure, 1 when a verdict failed, 0 otherwise.
    pub fn exit_code(&self) -> u8 {
        if self.families.iter().any(|f| f.failed_op.is_some()) {
            3
        } else if self.families.iter().any(|f| f.report.verdict.is_fail()) {
            1
        } else {
            0
        }
    }

    pub fn summary(&self) -> Summary {
        Summary {
            weight: self.config.weight.clone(),
            nmax: self.config.nmax,
            n_list: self.resolved.n_list.clone(),
            radius: self.resolved.radius,
            interior_precision: if self.resolved.multi { "multi" } else { "double" },
            all_pass: self.families.iter().all(|f| !f.report.verdict.is_fail()),
            families: self
                .families
                .iter()
                .map(|f| FamilyVerdict {
                    family: f.family.name().to_string(),
                    verdict: f.report.verdict.clone(),
                    reason: f.report.reason.clone(),
                })
                .collect(),
        }
    }
}

/// Oracles shared by the families.
struct Oracles {
    rule: Option<DiskRule>,
    basis: Option<OrthoBasis>,
    multi: Option<OrthoBasis<Hp>>,
}

impl Oracles {
    fn basis(&self) -> &OrthoBasis {
        self.basis.as_ref().expect("double basis planned")
    }

    fn interior(&self) -> &dyn Oracle {
        match &self.multi {
            Some(b) => b,
            None => self.basis(),
        }
    }
}

/// Degree of the double basis each family needs, `None` for no basis.
fn double_degree(family: Family, r: &Resolved) -> Option<usize> {
    let nmax = r.n_list.iter().copied().max().unwrap_or(0);
    let alpha = r.alpha_n.iter().copied().max().unwrap_or(0) + r.alpha_span;
    match family {
        Family::Strong => Some(nmax),
        Family::Alpha | Family::AlphaDecay => Some(alpha),
        Family::Theorem1 => Some(nmax.max(3 * r.theorem1_n.iter().copied().max().unwrap_or(0) + 1)),
        Family::ExpIdentity => Some(r.exp_nmax),
        f if f.is_interior() && !r.multi => Some(nmax),
        _ => None,
    }
}

fn build(cfg: &RunConfig, r: &Resolved) -> Result<Oracles, CliError> {
    let degree = r.families.iter().filter_map(|f| double_degree(*f, r)).max();
    let needs_rule = degree.is_some() || r.families.contains(&Family::Faber);
    let rule_degree = degree.unwrap_or(0).max(cfg.nmax);
    let multi_degree = r.n_list.iter().copied().max().unwrap_or(0);
    let needs_multi = r.multi && r.families.iter().any(|f| f.is_interior());

    let double = || -> Result<(Option<DiskRule>, Option<OrthoBasis>), CliError> {
        if !needs_rule {
            return Ok((None, None));
        }
        let rule = DiskRule::build(&r.spec, cfg.quad.orders(rule_degree))
            .map_err(CliError::numerical("quadrature::DiskRule::build"))?;
        let basis = degree
            .map(|d| orthonormalize(&r.spec, d, &rule))
            .transpose()
            .map_err(CliError::numerical("orthosystem::orthonormalize"))?;
        Ok((Some(rule), basis))
    };
    let multi = || -> Result<Option<OrthoBasis<Hp>>, CliError> {
        if !needs_multi {
            return Ok(None);
        }
        let rule = DiskRule::<Hp>::build(&r.spec, cfg.quad.orders(multi_degree))
            .map_err(CliError::numerical("quadrature::DiskRule::build (multiprecision)"))?;
        orthonormalize(&r.spec, multi_degree, &rule)
            .map(Some)
            .map_err(CliError::numerical("orthosystem::orthonormalize (multiprecision)"))
    };
    let (double, multi) = rayon::join(double, multi);
    let (rule, basis) = double?;
    Ok(Oracles { rule, basis, multi: multi? })
}

/// Runs the families of a validated config in parallel.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let resolved = cfg.resolve()?;
    let oracles = build(cfg, &resolved)?;
    let families = resolved
        .families
        .par_iter()
        .map(|&family| run_family(family, cfg, &resolved, &oracles))
        .collect();
    Ok(RunOutcome { config: cfg.clone(), resolved, families })
}

fn run_family(family: Family, cfg: &RunConfig, r: &Resolved, o: &Oracles) -> FamilyOutcome {
    let (op, result) = compute(family, cfg, r, o);
    let (report, failed_op) = match result {
        Ok(report) => (report, None),
        Err(Error::Precondition(reason)) => (ConvergenceReport::skipped(family.name(), reason), None),
        Err(e @ Error::UnsupportedSingularityCount(_)) => (ConvergenceReport::skipped(family.name(), e.to_string()), None),
        Err(e) => {
            let reason = format!("{op}: {e}");
            let mut report = ConvergenceReport::new(family.name());
            report.verdict = Verdict::Fail(reason.clone());
            report.reason = Some(reason);
            (report, Some(op))
        }
    };
    FamilyOutcome { family, report, failed_op }
}

fn compute(family: Family, cfg: &RunConfig, r: &Resolved, o: &Oracles) -> (&'static str, bergman::Result<ConvergenceReport>) {
    let spec = &r.spec;
    let n = &r.n_list[..];
    match family {
        Family::Strong => ("asymptotics::strong_asymptotics_report", strong_asymptotics_report(spec, o.basis(), n, r.radius)),
        Family::Faber => (
            "asymptotics::faber_norm_report",
            faber_norm_report(spec, o.rule.as_ref().expect("rule planned"), n),
        ),
        Family::Alpha => {
            let k_max = r.alpha_n.iter().copied().max().unwrap_or(0) + r.alpha_span;
            ("asymptotics::alpha_structure_report", alpha_structure_report(spec, o.basis(), &r.alpha_n, k_max, None, cfg.tol.alpha()))
        }
        Family::AlphaDecay => ("asymptotics::alpha_decay_report", alpha_decay_report(spec, o.basis(), &r.alpha_n, r.alpha_span)),
        Family::Theorem1 => {
            let op = "asymptotics::theorem1_report";
            let kernel = match KernelL::new(spec, cfg.tol.kernel()) {
                Ok(k) => k,
                Err(e) => return ("kernel::KernelL::new", Err(e)),
            };
            let with_h = r.theorem1_n.clone();
            let without_h = n.iter().copied().filter(|&k| k > 0).collect();
            let mut opts = TheoremOptions::new(r.radius, with_h, without_h, cfg.tol.theorem1());
            opts.min_nodes = cfg.quad.circle_n.unwrap_or(0);
            (op, theorem1_report(spec, o.basis(), &kernel, &opts))
        }
        Family::Kernel => {
            let pairs: Vec<(C64, C64)> =
                KERNEL_PAIRS.iter().map(|&(a, b, c, d)| (C64::new(a, b), C64::new(c, d))).collect();
            ("asymptotics::kernel_report", kernel_report(spec, cfg.tol.kernel(), r.kernel_degree, &pairs))
        }
        Family::ExpIdentity => {
            let count = cfg.quad.circle_n.unwrap_or((4 * r.exp_nmax + 64).next_power_of_two().max(512));
            (
                "asymptotics::exp_identity_report",
                exp_identity_report(spec, o.basis(), r.exp_nmax, count, &disk_grid(10, 10), cfg.tol.exp_identity()),
            )
        }
        Family::BsZero => ("asymptotics::bs_zero_report", bs_zero_report(spec, o.interior(), n)),
        Family::Rk0 => {
            let kernel = match KernelL::new(spec, cfg.tol.kernel()) {
                Ok(k) => k,
                Err(e) => return ("kernel::KernelL::new", Err(e)),
            };
            ("asymptotics::rk0_point_report", rk0_point_report(spec, o.interior(), n, r.z, kernel.j_constant))
        }
        Family::Branch => (
            "asymptotics::branch_ratio_report",
            branch_ratio_report(spec, o.interior(), n, r.z, cfg.tol.branch()),
        ),
        Family::Rational => ("asymptotics::rational_residue_report", rational_residue_report(spec, o.interior(), n, &r.z_samples)),
        Family::Tau => ("asymptotics::tau_report", tau_report(spec, o.interior(), &r.zetas, cfg.tol.tau())),
    }
}
