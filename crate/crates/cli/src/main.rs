//! `hsp`: batch verification, symplectic factorization, demo evolutions and
//! structure-constant export.
//!
//! Exit codes: 0 success, 1 a check failed (or the input matrix is not
//! symplectic), 2 invalid configuration or input.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use hsp_core::aut_group::AutElement;
use hsp_core::hilbert_rep::{upsilon_apply, GridSpec, GridWavefunction, RepConfig};
use hsp_core::lie_algebra::hsp_structure_constants;
use hsp_core::matrix::Matrix;
use hsp_core::symplectic::{sp_check, sp_compose_factors, sp_factorize, SymplecticMatrix, SP_TOL};
use hsp_core::verify::{run_verify, VerifyConfig};

#[derive(Parser)]
#[command(name = "hsp", version, about = "Weyl-Heisenberg and symplectic representation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suites and emit a JSON report.
    Verify(VerifyArgs),
    /// Factorize a symplectic matrix given as a JSON row-major array.
    Factorize {
        matrix: PathBuf,
        /// Tolerance of the symplectic membership check.
        #[arg(long, default_value_t = SP_TOL)]
        tol: f64,
    },
    /// Evolve a Gaussian along a path of HSp(2n) elements; CSV to stdout.
    Demo(DemoArgs),
    /// Export the hsp(2n) structure constants as sparse JSON.
    Structure {
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Suite name or "all".
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "grid-N")]
    grid_points: Option<usize>,
    #[arg(long = "grid-L")]
    grid_length: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long, env = "HSP_SEED")]
    seed: Option<u64>,
    /// JSON object mapping record names to tolerances.
    #[arg(long)]
    tol_overrides: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(clap::Args)]
struct DemoArgs {
    /// JSON array of elements {delta, sigma, z, iota}; omit for an empty path.
    #[arg(long)]
    path: Option<PathBuf>,
    /// Dimension used when the path is empty.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Width of the initial Gaussian.
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Initial center, comma separated (defaults to the origin).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    center: Vec<f64>,
    #[arg(long = "grid-N", default_value_t = 256)]
    grid_points: usize,
    /// Box length; defaults to the self-dual length √(2πN/|λ|).
    #[arg(long = "grid-L")]
    grid_length: Option<f64>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    lambda: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// An error that maps to exit code 2.
#[derive(Debug)]
struct InvalidInput(String);

impl std::fmt::Display for InvalidInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InvalidInput {}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    InvalidInput(msg.into()).into()
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {what} {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| invalid(format!("cannot parse {what} {}: {e}", path.display())))
}

fn write_output(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => match io::stdout().write_all(text.as_bytes()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<bool> {
    let mut cfg: VerifyConfig = match &args.config {
        Some(p) => read_json(p, "config")?,
        None => VerifyConfig::default(),
    };
    if let Some(s) = args.suite {
        cfg.suite = s;
    }
    cfg.n = args.n.or(cfg.n);
    cfg.grid_points = args.grid_points.or(cfg.grid_points);
    cfg.grid_length = args.grid_length.or(cfg.grid_length);
    cfg.lambda = args.lambda.unwrap_or(cfg.lambda);
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    if let Some(p) = &args.tol_overrides {
        let extra: BTreeMap<String, f64> = read_json(p, "tolerance overrides")?;
        cfg.tolerances.extend(extra);
    }
    cfg.validate().map_err(|e| invalid(e.to_string()))?;
    let Format::Json = args.format;
    let report = run_verify(&cfg).map_err(|e| invalid(e.to_string()))?;
    for r in report.failing() {
        eprintln!("FAIL {}: max_residual {:e} > tolerance {:e}", r.name, r.max_residual, r.tolerance);
    }
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    write_output(args.out.as_deref(), &text)?;
    Ok(report.pass)
}

fn cmd_factorize(path: &Path, tol: f64) -> anyhow::Result<bool> {
    let m: Matrix<f64> = read_json(path, "matrix")?;
    let diag = sp_check(&m, tol).map_err(|e| invalid(e.to_string()))?;
    if !diag.is_symplectic {
        write_output(None, &format!("{}\n", json!({ "error": "not symplectic", "residual": diag.residual })))?;
        eprintln!("matrix is not symplectic: residual {:e} > {tol:e}", diag.residual);
        return Ok(false);
    }
    let s = SymplecticMatrix::new(m, tol).map_err(|e| invalid(e.to_string()))?;
    let f = match sp_factorize(&s) {
        Ok(f) => f,
        Err(e) => bail!(invalid(e.to_string())),
    };
    let back = sp_compose_factors(&f.factors)?;
    let out = json!({
        "gamma": f.factors.gamma,
        "alpha": f.factors.alpha,
        "beta": f.factors.beta,
        "epsilon": f.factors.epsilon,
        "reconstruction_residual": back.matrix().max_abs_diff(s.matrix()),
        "pivot_det": f.pivot_det,
        "ill_conditioned": f.ill_conditioned,
    });
    write_output(None, &format!("{}\n", serde_json::to_string_pretty(&out)?))?;
    Ok(true)
}

fn cmd_demo(args: DemoArgs) -> anyhow::Result<bool> {
    let path: Vec<AutElement<f64>> = match &args.path {
        Some(p) => read_json(p, "path")?,
        None => Vec::new(),
    };
    let n = path.first().map_or(args.n, AutElement::n);
    if let Some((k, _)) = path.iter().enumerate().find(|(_, g)| g.n() != n) {
        return Err(invalid(format!("path step {k} has a different dimension")));
    }
    if let Some(k) = path.iter().position(|g| *g.delta() != 1.0) {
        return Err(invalid(format!("path step {k}: delta != 1 is not a symmetry of the commutation relations")));
    }
    let cfg = RepConfig::with_lambda(args.lambda).map_err(|e| invalid(e.to_string()))?;
    let spec = match args.grid_length {
        Some(l) => GridSpec::new(n, args.grid_points, l),
        None => GridSpec::self_dual(n, args.grid_points, args.lambda),
    }
    .map_err(|e| invalid(e.to_string()))?;
    let center = if args.center.is_empty() { vec![0.0; n] } else { args.center.clone() };
    if center.len() != n || args.sigma.is_nan() || args.sigma <= 0.0 {
        return Err(invalid("center must have n entries and sigma must be positive"));
    }
    let mut psi = GridWavefunction::gaussian_packet(spec, args.sigma, &center, &vec![0.0; n]);
    let header = if n == 1 { "x".to_string() } else { (1..=n).map(|i| format!("x{i}")).collect::<Vec<_>>().join(",") };
    let mut csv = format!("step,{header},density,norm\n");
    let mut snapshot = |step: usize, psi: &GridWavefunction| {
        let norm = psi.norm();
        let mut grid = psi.clone();
        grid.map_points(|x, v| {
            let coords = x.iter().map(|c| format!("{c:e}")).collect::<Vec<_>>().join(",");
            csv.push_str(&format!("{step},{coords},{:e},{norm:e}\n", v.norm_sqr()));
        });
    };
    snapshot(0, &psi);
    for (k, g) in path.iter().enumerate() {
        psi = upsilon_apply(g, &psi, &cfg)?;
        snapshot(k + 1, &psi);
    }
    write_output(args.out.as_deref(), &csv)?;
    Ok(true)
}

fn cmd_structure(n: usize) -> anyhow::Result<bool> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    write_output(None, &format!("{}\n", serde_json::to_string_pretty(&hsp_structure_constants(n).to_json())?))?;
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Factorize { matrix, tol } => cmd_factorize(&matrix, tol),
        Command::Demo(args) => cmd_demo(args),
        Command::Structure { n } => cmd_structure(n),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.is::<InvalidInput>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
