use std::path::PathBuf;
use std::process::ExitCode;

use bergman::orthosystem::{orthonormalize, Oracle};
use bergman::quadrature::DiskRule;
use bergman::representation::alpha_table;
use bergman::Hp;
use bergman_cli::output::{write_json, write_outputs};
use bergman_cli::{run, sweep, thread_limit, CliError, RunConfig, SweepParam};
use clap::{Args, Parser, Subcommand};

/// Weighted Bergman polynomials on the unit disk: build bases and validate their asymptotics.
#[derive(Parser)]
#[command(name = "bergman", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every family of the config and write CSV, JSON and summary files.
    Validate {
        config: PathBuf,
        #[command(flatten)]
        over: Overrides,
    },
    /// Re-run the config for each value of one parameter.
    Sweep {
        config: PathBuf,
        /// nmax, radius or quad.{radial,angular,patch,circle_n}
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[command(flatten)]
        over: Overrides,
    },
    /// Build the orthonormal basis of degree nmax and export it as JSON.
    Basis {
        config: PathBuf,
        /// Output file; defaults to <out>/basis.json.
        #[arg(long)]
        export: Option<PathBuf>,
        #[command(flatten)]
        over: Overrides,
    },
    /// Tabulate the coefficients α_{n,k} for one degree.
    Alpha {
        config: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        kmax: usize,
        #[command(flatten)]
        over: Overrides,
    },
}

/// Command-line overrides of config fields.
#[derive(Args)]
struct Overrides {
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    quad_radial: Option<usize>,
    #[arg(long)]
    quad_angular: Option<usize>,
    #[arg(long)]
    circle_n: Option<usize>,
    /// Tolerance override as key=value; repeatable.
    #[arg(long)]
    tol: Vec<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Overrides {
    fn load(&self, path: &std::path::Path) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::load(path)?;
        if let Some(n) = self.nmax {
            cfg.set_nmax(n);
        }
        if self.radius.is_some() {
            cfg.radius = self.radius;
        }
        if self.quad_radial.is_some() {
            cfg.quad.radial = self.quad_radial;
        }
        if self.quad_angular.is_some() {
            cfg.quad.angular = self.quad_angular;
        }
        if self.circle_n.is_some() {
            cfg.quad.circle_n = self.circle_n;
        }
        for t in &self.tol {
            cfg.tol.set(t)?;
        }
        if let Some(out) = &self.out {
            cfg.out_dir = out.clone();
        }
        Ok(cfg)
    }
}

fn validate(config: &std::path::Path, over: &Overrides) -> Result<u8, CliError> {
    let cfg = over.load(config)?;
    let outcome = run(&cfg)?;
    write_outputs(&cfg.out_dir, &outcome)?;
    for f in &outcome.families {
        match (&f.failed_op, &f.report.reason) {
            (Some(_), Some(reason)) => eprintln!("{}: numerical failure in {reason}", f.family),
            (None, Some(reason)) => println!("{}: {} ({reason})", f.family, f.report.verdict),
            _ => println!("{}: {}", f.family, f.report.verdict),
        }
    }
    Ok(outcome.exit_code())
}

fn run_sweep(config: &std::path::Path, param: &str, values: &[String], over: &Overrides) -> Result<u8, CliError> {
    let cfg = over.load(config)?;
    let param: SweepParam = param.parse()?;
    let outcome = sweep(&cfg, param, values)?;
    for p in &outcome.points {
        let verdicts: Vec<String> = p.families.iter().map(|f| format!("{}={}", f.family, f.verdict)).collect();
        println!("{param}={}: {}", p.value, verdicts.join(" "));
    }
    for flip in &outcome.non_robust {
        println!("non-robust: {} ({})", flip.family, flip.verdicts.join(" -> "));
    }
    Ok(outcome.exit_code())
}

fn basis(config: &std::path::Path, export: Option<PathBuf>, over: &Overrides) -> Result<u8, CliError> {
    let cfg = over.load(config)?;
    let r = cfg.resolve()?;
    let orders = cfg.quad.orders(cfg.nmax);
    let export_data = if r.multi {
        let rule = DiskRule::<Hp>::build(&r.spec, orders).map_err(numerical("quadrature::DiskRule::build (multiprecision)"))?;
        orthonormalize(&r.spec, cfg.nmax, &rule).map_err(numerical("orthosystem::orthonormalize (multiprecision)"))?.export()
    } else {
        let rule = DiskRule::<f64>::build(&r.spec, orders).map_err(numerical("quadrature::DiskRule::build"))?;
        orthonormalize(&r.spec, cfg.nmax, &rule).map_err(numerical("orthosystem::orthonormalize"))?.export()
    };
    let path = export.unwrap_or_else(|| cfg.out_dir.join("basis.json"));
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    }
    write_json(&path, &export_data)?;
    println!("degree {} basis written to {}", export_data.degree, path.display());
    Ok(0)
}

fn alpha(config: &std::path::Path, n: usize, kmax: usize, over: &Overrides) -> Result<u8, CliError> {
    let cfg = over.load(config)?;
    let r = cfg.resolve()?;
    if n > kmax {
        return Err(CliError::Config(format!("--n {n} exceeds --kmax {kmax}")));
    }
    let rule = DiskRule::build(&r.spec, cfg.quad.orders(kmax)).map_err(numerical("quadrature::DiskRule::build"))?;
    let basis = orthonormalize(&r.spec, kmax, &rule).map_err(numerical("orthosystem::orthonormalize"))?;
    let table = alpha_table(&r.spec, &basis, n, kmax, None).map_err(numerical("representation::alpha_table"))?;
    std::fs::create_dir_all(&cfg.out_dir).map_err(|source| CliError::Io { path: cfg.out_dir.clone(), source })?;
    let path = cfg.out_dir.join(format!("alpha_n{n}.json"));
    write_json(&path, &table)?;
    for k in n..=kmax {
        let a = table.get(k);
        println!("{k}\t{:.6e}\t{:.6e}", a.re, a.im);
    }
    println!("table written to {} (degree of basis {})", path.display(), Oracle::degree(&basis));
    Ok(0)
}

fn numerical(op: &'static str) -> impl FnOnce(bergman::Error) -> CliError {
    move |source| CliError::Numerical { op, source }
}

fn dispatch(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Validate { config, over } => validate(&config, &over),
        Command::Sweep { config, param, values, over } => run_sweep(&config, &param, &values, &over),
        Command::Basis { config, export, over } => basis(&config, export, &over),
        Command::Alpha { config, n, kmax, over } => alpha(&config, n, kmax, &over),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = thread_limit().and_then(|limit| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(limit.unwrap_or(0))
            .build()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
        pool.install(|| dispatch(cli))
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("bergman: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
