//! Run configuration: the weight, degrees, quadrature orders and families to validate.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use bergman::quadrature::QuadOrders;
use bergman::weight::WeightConfig;
use bergman::{WeightSpec, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Validator families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Strong,
    Faber,
    Alpha,
    AlphaDecay,
    Theorem1,
    Kernel,
    ExpIdentity,
    BsZero,
    Rk0,
    Branch,
    Rational,
    Tau,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::Strong,
        Family::Faber,
        Family::Alpha,
        Family::AlphaDecay,
        Family::Theorem1,
        Family::Kernel,
        Family::ExpIdentity,
        Family::BsZero,
        Family::Rk0,
        Family::Branch,
        Family::Rational,
        Family::Tau,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Strong => "strong",
            Family::Faber => "faber",
            Family::Alpha => "alpha",
            Family::AlphaDecay => "alpha_decay",
            Family::Theorem1 => "theorem1",
            Family::Kernel => "kernel",
            Family::ExpIdentity => "exp_identity",
            Family::BsZero => "bs_zero",
            Family::Rk0 => "rk0",
            Family::Branch => "branch",
            Family::Rational => "rational",
            Family::Tau => "tau",
        }
    }

    /// Families that probe `p_n` inside the disk, where double precision runs out.
    pub fn is_interior(self) -> bool {
        matches!(self, Family::BsZero | Family::Rk0 | Family::Branch | Family::Rational | Family::Tau)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Working precision of the interior families.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    /// Multiprecision when the weight is smooth, double otherwise.
    #[default]
    Auto,
    Double,
    Multi,
}

/// Quadrature overrides; unset orders follow the basis degree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radial: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angular: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub patch: Option<usize>,
    /// Node count on circles: the Szegő inner product and the floor of contour rules.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circle_n: Option<usize>,
}

impl QuadConfig {
    /// Orders for a basis of degree `n` with the overrides applied.
    pub fn orders(&self, n: usize) -> QuadOrders {
        let base = QuadOrders::for_degree(n);
        QuadOrders {
            radial: self.radial.unwrap_or(base.radial),
            angular: self.angular.unwrap_or(base.angular),
            patch: self.patch.unwrap_or(base.patch),
        }
    }
}

/// Tolerance overrides for the families judged against a fixed threshold.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exp_identity: Option<f64>,
    /// Truncation tolerance of the series for `K_h(0, 0)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    /// Largest admissible final ratio of the branch family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<f64>,
}

impl Tolerances {
    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(1e-8)
    }
    pub fn theorem1(&self) -> f64 {
        self.theorem1.unwrap_or(1e-6)
    }
    pub fn exp_identity(&self) -> f64 {
        self.exp_identity.unwrap_or(1e-7)
    }
    pub fn kernel(&self) -> f64 {
        self.kernel.unwrap_or(1e-14)
    }
    pub fn tau(&self) -> f64 {
        self.tau.unwrap_or(1e-3)
    }
    pub fn branch(&self) -> f64 {
        self.branch.unwrap_or(0.05)
    }

    /// Applies `key=value`.
    pub fn set(&mut self, assignment: &str) -> Result<(), CliError> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("tolerance override {assignment:?} is not key=value")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("tolerance {key:?} has non-numeric value {value:?}")))?;
        if !(value > 0.0 && value.is_finite()) {
            return Err(CliError::Config(format!("tolerance {key:?} must be positive, got {value}")));
        }
        let slot = match key.trim() {
            "alpha" => &mut self.alpha,
            "theorem1" => &mut self.theorem1,
            "exp_identity" => &mut self.exp_identity,
            "kernel" => &mut self.kernel,
            "tau" => &mut self.tau,
            "branch" => &mut self.branch,
            other => return Err(CliError::Config(format!("unknown tolerance {other:?}"))),
        };
        *slot = Some(value);
        Ok(())
    }
}

/// Family-specific knobs. Every field has a default.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Degrees for the alpha families.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_n: Option<Vec<usize>>,
    /// Columns beyond `n` in the alpha families.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_span: Option<usize>,
    /// Degrees for the full representation check; the truncated check uses `n_list`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem1_n: Option<Vec<usize>>,
    /// Largest degree of the exponential identity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exp_nmax: Option<usize>,
    /// Degree of the basis for `h` in the kernel family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_degree: Option<usize>,
    /// Interior point of the rk0 and branch families, `[re, im]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<[f64; 2]>,
    /// Sample points of the rational family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_samples: Option<Vec<[f64; 2]>>,
    /// Sample points of the tau family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zetas: Option<Vec<[f64; 2]>>,
}

/// The contents of a run config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub weight: WeightConfig,
    #[serde(default = "default_nmax")]
    pub nmax: usize,
    /// Degrees for the asymptotic families; defaults to powers of two up to `nmax`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub n_list: Vec<usize>,
    #[serde(default)]
    pub quad: QuadConfig,
    /// Contour radius; defaults to `max(0.95, (ρ_w + 1)/2)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default = "default_families")]
    pub families: Vec<Family>,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default)]
    pub tol: Tolerances,
    #[serde(default)]
    pub precision: Precision,
    #[serde(default)]
    pub params: Params,
}

fn default_nmax() -> usize {
    64
}

fn default_families() -> Vec<Family> {
    vec![Family::Strong, Family::Alpha]
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("bergman-out")
}

/// A validated config with every default filled in.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub spec: WeightSpec,
    pub n_list: Vec<usize>,
    pub radius: f64,
    pub families: Vec<Family>,
    pub alpha_n: Vec<usize>,
    pub alpha_span: usize,
    pub theorem1_n: Vec<usize>,
    pub exp_nmax: usize,
    pub kernel_degree: usize,
    pub z: C64,
    pub z_samples: Vec<C64>,
    pub zetas: Vec<C64>,
    /// Multiprecision oracle for the interior families.
    pub multi: bool,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Sets `nmax` and drops degrees above it from `n_list`.
    pub fn set_nmax(&mut self, nmax: usize) {
        self.nmax = nmax;
        self.n_list.retain(|&n| n <= nmax);
    }

    /// Checks every precondition that does not need a basis.
    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let spec = self.weight.to_spec().map_err(|e| CliError::Config(e.to_string()))?;
        let radii = spec.critical_radii();
        if self.nmax == 0 {
            return Err(CliError::Config("nmax must be at least 1".into()));
        }
        let mut n_list = if self.n_list.is_empty() { default_n_list(self.nmax) } else { self.n_list.clone() };
        if let Some(&n) = n_list.iter().find(|&&n| n > self.nmax) {
            return Err(CliError::Config(format!("n_list entry {n} lies outside [0, nmax = {}]", self.nmax)));
        }
        n_list.sort_unstable();
        n_list.dedup();

        let radius = self.radius.unwrap_or_else(|| 0.95f64.max((radii.rho_w + 1.0) / 2.0));
        if !(radius > radii.rho_w && radius < 1.0) {
            return Err(CliError::Config(format!(
                "radius {radius} violates the precondition rho_w < radius < 1 (rho_w = {})",
                radii.rho_w
            )));
        }

        for (name, order) in [("radial", self.quad.radial), ("angular", self.quad.angular), ("patch", self.quad.patch)] {
            if order.is_some_and(|o| o < 4) {
                return Err(CliError::Config(format!("quad.{name} must be at least 4")));
            }
        }
        if let Some(c) = self.quad.circle_n {
            if c < 16 || c % 2 != 0 {
                return Err(CliError::Config(format!("quad.circle_n = {c} must be even and at least 16")));
            }
        }

        let mut families = Vec::new();
        for f in &self.families {
            if !families.contains(f) {
                families.push(*f);
            }
        }
        if families.is_empty() {
            return Err(CliError::Config("no families requested".into()));
        }

        let multi = match self.precision {
            Precision::Double => false,
            Precision::Auto => spec.is_smooth(),
            Precision::Multi if spec.is_smooth() => true,
            Precision::Multi => {
                return Err(CliError::Config("precision \"multi\" needs a smooth weight (even positive m_k)".into()))
            }
        };

        let p = &self.params;
        let alpha_n = p.alpha_n.clone().unwrap_or_else(|| [8, 16, 32].into_iter().filter(|&n| n <= self.nmax).collect());
        let theorem1_n =
            p.theorem1_n.clone().unwrap_or_else(|| n_list.iter().copied().filter(|&n| (16..=40).contains(&n)).collect());
        let exp_nmax = p.exp_nmax.unwrap_or(self.nmax.min(24));
        let z = p.z.map_or(C64::new(0.0, 0.0), |[re, im]| C64::new(re, im));
        let z_samples = match &p.z_samples {
            Some(v) => v.iter().map(|&[re, im]| C64::new(re, im)).collect(),
            None => vec![C64::new(0.0, 0.0), C64::new(0.3, 0.1), C64::new(0.7, -0.2)],
        };
        let zetas = match &p.zetas {
            Some(v) => v.iter().map(|&[re, im]| C64::new(re, im)).collect(),
            None => {
                let mut v = vec![C64::new(0.2, 0.0), C64::new(0.0, 0.8), C64::new(-0.5, 0.0)];
                v.extend(spec.singularities.iter().map(|s| s.a));
                v
            }
        };
        for point in z_samples.iter().chain(&zetas).chain(std::iter::once(&z)) {
            if !(point.norm() < 1.0) {
                return Err(CliError::Config(format!("sample point {point} must lie in the open unit disk")));
            }
        }
        if let Some(&n) = alpha_n.iter().chain(&theorem1_n).find(|&&n| n == 0) {
            return Err(CliError::Config(format!("degree {n} is not allowed in params")));
        }

        Ok(Resolved {
            spec,
            n_list,
            radius,
            families,
            alpha_n,
            alpha_span: p.alpha_span.unwrap_or(32),
            theorem1_n,
            exp_nmax,
            kernel_degree: p.kernel_degree.unwrap_or(48),
            z,
            z_samples,
            zetas,
            multi,
        })
    }
}

/// Powers of two from 8 up to `nmax`, plus `nmax` itself.
fn default_n_list(nmax: usize) -> Vec<usize> {
    let mut out: Vec<usize> = std::iter::successors(Some(8usize), |n| Some(n * 2)).take_while(|&n| n <= nmax).collect();
    if out.last() != Some(&nmax) {
        out.push(nmax);
    }
    out
}

/// Parameters a sweep can vary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    Nmax,
    Radius,
    QuadRadial,
    QuadAngular,
    QuadPatch,
    CircleN,
}

impl FromStr for SweepParam {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "nmax" => SweepParam::Nmax,
            "radius" => SweepParam::Radius,
            "quad.radial" => SweepParam::QuadRadial,
            "quad.angular" => SweepParam::QuadAngular,
            "quad.patch" => SweepParam::QuadPatch,
            "quad.circle_n" | "circle_n" => SweepParam::CircleN,
            other => {
                return Err(CliError::Config(format!(
                    "unknown sweep parameter {other:?}; expected nmax, radius or quad.{{radial,angular,patch,circle_n}}"
                )))
            }
        })
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParam::Nmax => "nmax",
            SweepParam::Radius => "radius",
            SweepParam::QuadRadial => "quad.radial",
            SweepParam::QuadAngular => "quad.angular",
            SweepParam::QuadPatch => "quad.patch",
            SweepParam::CircleN => "quad.circle_n",
        })
    }
}

impl SweepParam {
    /// Copy of `cfg` with the parameter set to `value`.
    pub fn apply(self, cfg: &RunConfig, value: &str) -> Result<RunConfig, CliError> {
        let bad = || CliError::Config(format!("invalid value {value:?} for sweep parameter {self}"));
        let int = || value.trim().parse::<usize>().map_err(|_| bad());
        let mut out = cfg.clone();
        match self {
            SweepParam::Nmax => out.set_nmax(int()?),
            SweepParam::Radius => out.radius = Some(value.trim().parse::<f64>().map_err(|_| bad())?),
            SweepParam::QuadRadial => out.quad.radial = Some(int()?),
            SweepParam::QuadAngular => out.quad.angular = Some(int()?),
            SweepParam::QuadPatch => out.quad.patch = Some(int()?),
            SweepParam::CircleN => out.quad.circle_n = Some(int()?),
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(extra: &str) -> RunConfig {
        RunConfig::from_json(&format!(r#"{{"weight":{{"outer":{{"kind":"poly"}}}}{extra}}}"#)).unwrap()
    }

    #[test]
    fn defaults() {
        let r = unit("").resolve().unwrap();
        assert_eq!(r.n_list, vec![8, 16, 32, 64]);
        assert_eq!(r.radius, 0.95);
        assert_eq!(r.families, vec![Family::Strong, Family::Alpha]);
        assert!(r.multi);
        assert_eq!(default_n_list(20), vec![8, 16, 20]);
    }

    #[test]
    fn rejects_bad_degrees_and_radius() {
        assert!(matches!(unit(r#","nmax":16,"n_list":[8,32]"#).resolve(), Err(CliError::Config(_))));
        let cfg = RunConfig::from_json(
            r#"{"weight":{"outer":{"kind":"poly","factors":[[0.5,0,2]]}},"radius":0.4}"#,
        )
        .unwrap();
        let err = cfg.resolve().unwrap_err().to_string();
        assert!(err.contains("rho_w < radius < 1"), "{err}");
        assert!(RunConfig::from_json(r#"{"weight":{"outer":{"kind":"poly"}},"families":["nope"]}"#).is_err());
    }

    #[test]
    fn set_nmax_trims() {
        let mut cfg = unit(r#","nmax":64,"n_list":[16,32,64]"#);
        cfg.set_nmax(32);
        assert_eq!(cfg.resolve().unwrap().n_list, vec![16, 32]);
    }

    #[test]
    fn tolerance_overrides() {
        let mut t = Tolerances::default();
        t.set("alpha=1e-6").unwrap();
        assert_eq!(t.alpha(), 1e-6);
        assert!(t.set("bogus=1").is_err());
        assert!(t.set("tau=-1").is_err());
    }

    #[test]
    fn sweep_params() {
        let cfg = unit("");
        let p: SweepParam = "quad.radial".parse().unwrap();
        assert_eq!(p.apply(&cfg, "120").unwrap().quad.radial, Some(120));
        assert!("quad.bogus".parse::<SweepParam>().is_err());
        assert!(SweepParam::Radius.apply(&cfg, "x").is_err());
    }
}
