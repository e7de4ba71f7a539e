//! `bessel-heat`: evaluation commands and verification suites.
//!
//! Exit codes: 0 when every requested check passes, 1 on a failed check,
//! 2 on a usage or input error, 3 when a numerical routine does not converge
//! or cannot produce a finite answer.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bessel_heat::kernels::{self, KernelPoint};
use bessel_heat::monotonicity::{self, CaloricField};
use bessel_heat::report::{CaseRow, VerificationReport};
use bessel_heat::semigroup::{self, InitialDatum};
use bessel_heat::special_fn as sf;
use bessel_heat::verify::{self, Suite, SuiteConfig};
use bessel_heat::{vmf, Error, QuadratureSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "bessel-heat", version, about = "Bessel quotient, Bessel heat kernel and verification suites")]
struct Cli {
    /// TOML file with default values for the flags (same key names).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// I_nu, its scaled form and the quotient y_nu on a grid.
    Bessel {
        #[command(subcommand)]
        cmd: BesselCmd,
    },
    /// Heat kernel value and both Li-Yau routes.
    Kernel {
        #[command(subcommand)]
        cmd: KernelCmd,
    },
    /// P_t phi with its derivatives and Li-Yau terms.
    Semigroup {
        #[command(subcommand)]
        cmd: SemigroupCmd,
    },
    /// von Mises-Fisher concentration.
    Vmf {
        #[command(subcommand)]
        cmd: VmfCmd,
    },
    /// Frequency curves.
    Scan {
        #[command(subcommand)]
        cmd: ScanCmd,
    },
    /// Run a verification suite, or `all`.
    Verify {
        /// Suite name or `all`.
        suite: String,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        zmax: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        /// Overrides the primary tolerance of each suite.
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

#[derive(Subcommand, Debug)]
enum BesselCmd {
    Eval(GridArgs),
}

#[derive(Subcommand, Debug)]
enum KernelCmd {
    Eval(GridArgs),
}

#[derive(Subcommand, Debug)]
enum SemigroupCmd {
    Apply {
        #[command(flatten)]
        grid: GridArgs,
        /// `gaussian:c`, `bump:lo:hi`, `indicator:lo:hi` or `constant:c`.
        #[arg(long, default_value = "gaussian:1")]
        datum: String,
    },
}

#[derive(Subcommand, Debug)]
enum VmfCmd {
    /// Solve y_{n/2-1}(z) = rbar for z.
    EstimateKappa {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rbar: f64,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Round trip z -> rbar -> z.
    Check {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        z: f64,
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

#[derive(Subcommand, Debug)]
enum ScanCmd {
    /// H, I and N = I/H on a radius grid.
    Frequency {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 0.0)]
        z: f64,
        /// Homogeneity degree 0, 2 or 4, or `mixture` for the degree 2 field plus 0.1 times the degree 4 field.
        #[arg(long, default_value = "2")]
        kappa: String,
        #[arg(long, default_value_t = 0.25)]
        rmin: f64,
        #[arg(long, default_value_t = 2.0)]
        rmax: f64,
        #[arg(long, default_value_t = 8)]
        points: usize,
        /// Explicit radii; overrides `--rmin`, `--rmax` and `--points`.
        #[arg(long, value_delimiter = ',')]
        r: Option<Vec<f64>>,
    },
}

/// Comma-separated grids. Missing grids fall back to the config file, then
/// to the built-in defaults.
#[derive(Args, Debug, Default, Clone)]
struct GridArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    a: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    z: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    zeta: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    t: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    nu: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    a: Option<Vec<f64>>,
    z: Option<Vec<f64>>,
    zeta: Option<Vec<f64>>,
    t: Option<Vec<f64>>,
    nu: Option<Vec<f64>>,
    zmax: Option<f64>,
    seed: Option<u64>,
    samples: Option<usize>,
    tolerance: Option<f64>,
    output: Option<PathBuf>,
    format: Option<Format>,
    quadrature: Option<QuadratureSpec>,
}

enum Failure {
    Usage(String),
    Numerical(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e.root() {
            Error::Domain(_) | Error::InvalidInput(_) | Error::UnsupportedKappa(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e),
        }
    }
}

type Outcome = std::result::Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("numerical failure: {e}");
            ExitCode::from(3)
        }
    }
}

struct Ctx {
    file: FileConfig,
    output: Option<PathBuf>,
    format: Option<Format>,
}

impl Ctx {
    fn grid(&self, g: &GridArgs) -> GridArgs {
        GridArgs {
            a: g.a.clone().or_else(|| self.file.a.clone()),
            z: g.z.clone().or_else(|| self.file.z.clone()),
            zeta: g.zeta.clone().or_else(|| self.file.zeta.clone()),
            t: g.t.clone().or_else(|| self.file.t.clone()),
            nu: g.nu.clone().or_else(|| self.file.nu.clone()),
        }
    }

    fn spec(&self) -> QuadratureSpec {
        self.file.quadrature.unwrap_or_default()
    }

    fn emit<T: Serialize>(&self, rows: &[T], default: Format) -> std::result::Result<(), Failure> {
        let bytes = match self.format.unwrap_or(default) {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for r in rows {
                    w.serialize(r).map_err(|e| Failure::Io(e.to_string()))?;
                }
                w.into_inner().map_err(|e| Failure::Io(e.to_string()))?
            }
            Format::Json => {
                let mut v = if rows.len() == 1 {
                    serde_json::to_vec_pretty(&rows[0])
                } else {
                    serde_json::to_vec_pretty(rows)
                }
                .map_err(|e| Failure::Io(e.to_string()))?;
                v.push(b'\n');
                v
            }
        };
        write_out(self.output.as_deref(), &bytes)
    }
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => io::stdout().lock().write_all(bytes).map_err(|e| Failure::Io(e.to_string())),
    }
}

fn run(cli: Cli) -> Outcome {
    let file = match &cli.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            toml::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?
        }
        None => FileConfig::default(),
    };
    let ctx = Ctx { output: cli.output.clone().or_else(|| file.output.clone()), format: cli.format.or(file.format), file };
    if let Some(q) = &ctx.file.quadrature {
        q.validate()?;
    }
    match cli.command {
        Command::Bessel { cmd: BesselCmd::Eval(g) } => bessel_eval(&ctx, &ctx.grid(&g)),
        Command::Kernel { cmd: KernelCmd::Eval(g) } => kernel_eval(&ctx, &ctx.grid(&g)),
        Command::Semigroup { cmd: SemigroupCmd::Apply { grid, datum } } => semigroup_apply(&ctx, &ctx.grid(&grid), &datum),
        Command::Vmf { cmd } => vmf_cmd(&ctx, cmd),
        Command::Scan { cmd: ScanCmd::Frequency { a, z, kappa, rmin, rmax, points, r } } => {
            let r_grid = match r {
                Some(r) => r,
                None if 0.0 < rmin && rmin < rmax && rmax.is_finite() && points >= 2 => verify::lin_grid(rmin, rmax, points),
                None => return Err(Failure::Usage("need 0 < rmin < rmax and points >= 2".into())),
            };
            scan_frequency(&ctx, a, z, &kappa, r_grid)
        }
        Command::Verify { suite, grid, zmax, seed, samples, tolerance } => {
            let g = ctx.grid(&grid);
            let mut cfg = SuiteConfig { quadrature: ctx.spec(), ..SuiteConfig::default() };
            if let Some(v) = g.a {
                cfg.a_grid = v;
            }
            if let Some(v) = g.z {
                cfg.z_grid = v;
            }
            if let Some(v) = g.t {
                cfg.t_grid = v;
            }
            cfg.nu_grid = g.nu;
            cfg.zmax = zmax.or(ctx.file.zmax).unwrap_or(cfg.zmax);
            cfg.seed = seed.or(ctx.file.seed).unwrap_or(cfg.seed);
            cfg.samples = samples.or(ctx.file.samples);
            cfg.tolerance = tolerance.or(ctx.file.tolerance);
            verify_cmd(&ctx, &suite, &cfg)
        }
    }
}

/// A report row with the verdict spelled out, so informational rows stay
/// distinguishable from passes and failures in flat output.
#[derive(Serialize)]
struct Row<'a> {
    suite: &'a str,
    citation: &'a str,
    a: Option<f64>,
    nu: Option<f64>,
    z: Option<f64>,
    zeta: Option<f64>,
    t_or_r: Option<f64>,
    value_lhs: f64,
    value_rhs: f64,
    residual: f64,
    margin: f64,
    pass: &'static str,
}

impl<'a> From<&'a CaseRow> for Row<'a> {
    fn from(c: &'a CaseRow) -> Self {
        let pass = match (c.informational, c.pass) {
            (true, _) => "info",
            (false, true) => "true",
            (false, false) => "false",
        };
        Row {
            suite: &c.suite,
            citation: &c.citation,
            a: c.a,
            nu: c.nu,
            z: c.z,
            zeta: c.zeta,
            t_or_r: c.t_or_r,
            value_lhs: c.value_lhs,
            value_rhs: c.value_rhs,
            residual: c.residual,
            margin: c.margin,
            pass,
        }
    }
}

fn verify_cmd(ctx: &Ctx, name: &str, cfg: &SuiteConfig) -> Outcome {
    let suites: Vec<Suite> = if name == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![Suite::from_name(name).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
            Failure::Usage(format!("unknown suite '{name}'; expected all or one of {}", names.join(", ")))
        })?]
    };
    cfg.validate()?;
    let reports: Vec<VerificationReport> = suites.iter().map(|s| s.run(cfg)).collect::<bessel_heat::Result<_>>()?;
    let rows: Vec<Row> = reports.iter().flat_map(|r| r.cases.iter().map(Row::from)).collect();
    // JSON is always an array here, even for a single row.
    match ctx.format.unwrap_or(Format::Csv) {
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(&rows).map_err(|e| Failure::Io(e.to_string()))?;
            v.push(b'\n');
            write_out(ctx.output.as_deref(), &v)?;
        }
        Format::Csv => ctx.emit(&rows, Format::Csv)?,
    }
    for r in &reports {
        let status = if r.overall_pass { "PASS" } else { "FAIL" };
        let worst = r.worst().map(|c| format!(" worst {} margin {:e}", c.citation, c.margin)).unwrap_or_default();
        eprintln!("{:<24} {status} {} rows{worst}", r.suite, r.cases.len());
        for f in r.failures().take(5) {
            eprintln!("  failed {} a={:?} nu={:?} z={:?} zeta={:?} t_or_r={:?} residual={:e}", f.citation, f.a, f.nu, f.z, f.zeta, f.t_or_r, f.residual);
        }
    }
    Ok(reports.iter().all(|r| r.overall_pass))
}

fn need<'a>(v: &'a Option<Vec<f64>>, flag: &str) -> std::result::Result<&'a [f64], Failure> {
    match v {
        Some(v) if !v.is_empty() => Ok(v),
        _ => Err(Failure::Usage(format!("--{flag} is required"))),
    }
}

#[derive(Serialize)]
struct BesselRow {
    nu: f64,
    z: f64,
    i_nu: f64,
    i_nu_scaled: f64,
    quotient: f64,
    complement: f64,
    quotient_derivative: f64,
    method: String,
}

fn bessel_eval(ctx: &Ctx, g: &GridArgs) -> Outcome {
    let mut rows = Vec::new();
    for &nu in need(&g.nu, "nu")? {
        for &z in need(&g.z, "z")? {
            let q = sf::quotient_eval(nu, z)?;
            // I_nu overflows past z ~ 700; the scaled value stays available.
            let i_nu = match sf::bessel_i(nu, z) {
                Ok(r) => r.value,
                Err(Error::Overflow { .. }) => f64::INFINITY,
                Err(e) => return Err(e.into()),
            };
            let derivative = if z > 0.0 { sf::quotient_derivative(nu, z)? } else { f64::NAN };
            rows.push(BesselRow {
                nu,
                z,
                i_nu,
                i_nu_scaled: sf::bessel_i_scaled(nu, z)?,
                quotient: q.value,
                complement: sf::quotient_complement(nu, z)?,
                quotient_derivative: derivative,
                method: format!("{:?}", q.method),
            });
        }
    }
    ctx.emit(&rows, Format::Csv)?;
    Ok(true)
}

#[derive(Serialize)]
struct KernelRow {
    a: f64,
    z: f64,
    zeta: f64,
    t: f64,
    value: f64,
    log_value: f64,
    gap_identity: f64,
    gap_derivatives: f64,
    bound: f64,
    log_margin: f64,
    route_residual: f64,
    strict: bool,
}

fn kernel_eval(ctx: &Ctx, g: &GridArgs) -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for &a in need(&g.a, "a")? {
        for &z in need(&g.z, "z")? {
            for &zeta in need(&g.zeta, "zeta")? {
                for &t in need(&g.t, "t")? {
                    let pt = KernelPoint::new(z, zeta, t)?;
                    let log_value = kernels::heat_kernel_log(a, &pt)?;
                    let gap = kernels::liyau_gap(a, &pt)?;
                    ok &= a < 0.0 || zeta == 0.0 || gap.strictly_below_bound();
                    rows.push(KernelRow {
                        a,
                        z,
                        zeta,
                        t,
                        value: log_value.exp(),
                        log_value,
                        gap_identity: gap.via_identity,
                        gap_derivatives: gap.via_derivatives,
                        bound: gap.bound,
                        log_margin: gap.log_margin,
                        route_residual: gap.route_residual(),
                        strict: gap.strictly_below_bound(),
                    });
                }
            }
        }
    }
    ctx.emit(&rows, Format::Csv)?;
    Ok(ok)
}

fn parse_datum(s: &str) -> std::result::Result<InitialDatum, Failure> {
    let bad = || Failure::Usage(format!("bad datum '{s}'; expected gaussian:c, bump:lo:hi, indicator:lo:hi or constant:c"));
    let mut parts = s.split(':');
    let kind = parts.next().ok_or_else(bad)?;
    let nums: Vec<f64> = parts.map(|p| p.parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
    if nums.iter().any(|x| !x.is_finite()) {
        return Err(bad());
    }
    match (kind, nums.as_slice()) {
        ("gaussian", [c]) if *c > 0.0 => Ok(InitialDatum::gaussian(*c)),
        ("constant", [c]) if *c > 0.0 => Ok(InitialDatum::constant(*c)),
        ("bump", [lo, hi]) if 0.0 <= *lo && lo < hi => Ok(InitialDatum::bump(*lo, *hi)),
        ("indicator", [lo, hi]) if 0.0 <= *lo && lo < hi => Ok(InitialDatum::indicator(*lo, *hi)),
        _ => Err(bad()),
    }
}

#[derive(Serialize)]
struct SemigroupRow {
    a: f64,
    z: f64,
    t: f64,
    u: f64,
    du_dz: f64,
    du_dt: f64,
    lhs: f64,
    bound: f64,
    remainder: f64,
    pass: bool,
}

fn semigroup_apply(ctx: &Ctx, g: &GridArgs, datum: &str) -> Outcome {
    let phi = parse_datum(datum)?;
    let spec = ctx.spec();
    let mut rows = Vec::new();
    for &a in need(&g.a, "a")? {
        for &z in need(&g.z, "z")? {
            for &t in need(&g.t, "t")? {
                let h = semigroup::apply_with_derivatives(a, &phi, z, t, &spec)?;
                let rec = semigroup::liyau_functional(a, &phi, z, t, &spec)?;
                rows.push(SemigroupRow {
                    a,
                    z,
                    t,
                    u: h.u,
                    du_dz: h.du_dz,
                    du_dt: h.du_dt,
                    lhs: rec.lhs,
                    bound: rec.bound,
                    remainder: rec.remainder,
                    pass: rec.lhs <= rec.bound,
                });
            }
        }
    }
    ctx.emit(&rows, Format::Csv)?;
    // Below the sharp range the inequality is not claimed.
    Ok(rows.iter().all(|r| r.pass || r.a < 0.0))
}

#[derive(Serialize)]
struct VmfRow {
    n: usize,
    z: f64,
    rbar: f64,
    iterations: usize,
    residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    z_input: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    relative_error: Option<f64>,
}

fn vmf_cmd(ctx: &Ctx, cmd: VmfCmd) -> Outcome {
    match cmd {
        VmfCmd::EstimateKappa { n, rbar, tolerance } => {
            let tol = tolerance.or(ctx.file.tolerance).unwrap_or(1e-12);
            let e = vmf::estimate_concentration(n, rbar, tol)?;
            let row = VmfRow { n, z: e.z, rbar: e.rbar, iterations: e.iterations, residual: e.residual, z_input: None, relative_error: None };
            ctx.emit(&[row], Format::Json)?;
            Ok(e.residual <= tol)
        }
        VmfCmd::Check { n, z, tolerance } => {
            let tol = tolerance.or(ctx.file.tolerance).unwrap_or(1e-8);
            if !(z > 0.0 && z.is_finite()) {
                return Err(Failure::Usage(format!("z = {z} must be positive")));
            }
            let rbar = sf::bessel_quotient(0.5 * n as f64 - 1.0, z)?;
            let e = vmf::estimate_concentration(n, rbar, 1e-14)?;
            let rel = (e.z - z).abs() / z.max(1.0);
            let row = VmfRow { n, z: e.z, rbar, iterations: e.iterations, residual: e.residual, z_input: Some(z), relative_error: Some(rel) };
            ctx.emit(&[row], Format::Json)?;
            Ok(rel <= tol)
        }
    }
}

#[derive(Serialize)]
struct FrequencyRow {
    a: f64,
    z: f64,
    r: f64,
    height: f64,
    dirichlet: f64,
    frequency: f64,
}

fn scan_frequency(ctx: &Ctx, a: f64, z: f64, kappa: &str, r_grid: Vec<f64>) -> Outcome {
    let u = match kappa {
        "mixture" => CaloricField::mixture(
            a,
            vec![(1.0, monotonicity::homogeneous_solution(a, 2)?), (0.1, monotonicity::homogeneous_solution(a, 4)?)],
        )?,
        k => {
            let k: u32 = k.parse().map_err(|_| Failure::Usage(format!("bad --kappa '{k}'; expected 0, 2, 4 or mixture")))?;
            monotonicity::homogeneous_solution(a, k)?
        }
    };
    if !(z >= 0.0 && z.is_finite()) {
        return Err(Failure::Usage(format!("z = {z} must be nonnegative")));
    }
    let (curve, report) = monotonicity::poon_scan(&u, z, &r_grid, &ctx.spec())?;
    let rows: Vec<FrequencyRow> = (0..curve.r_grid.len())
        .map(|i| FrequencyRow { a, z, r: curve.r_grid[i], height: curve.h[i], dirichlet: curve.i[i], frequency: curve.n[i] })
        .collect();
    ctx.emit(&rows, Format::Csv)?;
    Ok(report.overall_pass)
}
