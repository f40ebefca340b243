use clap::{Args, Parser, Subcommand};
use klab::manifolds::ManifoldSpec;
use klab::report::{emit_report, ReportFormat};
use klab::suite::{run_suite, suite_passed, SuiteConfig};
use klab::GeomError;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "klab",
    version,
    about = "Pointwise verification of 3-Kenmotsu structures"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the verification suite on a builtin manifold or a JSON definition
    /// file.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Builtin name (example_r5, warped_flat, flat_control) or path to a
    /// manifold definition file.
    #[arg(long, default_value = "example_r5", env = "KLAB_MANIFOLD")]
    manifold: String,
    /// Number of chart points to sample.
    #[arg(long, default_value_t = 100, env = "KLAB_POINTS")]
    points: usize,
    /// Number of random tangent vectors per point.
    #[arg(long, default_value_t = 8, env = "KLAB_VECTORS")]
    vectors: usize,
    /// Seed for the deterministic sampling stream.
    #[arg(long, default_value_t = 0, env = "KLAB_SEED")]
    seed: u64,
    /// Tolerance override, repeatable: --tol <check-id>=<value>.
    #[arg(long = "tol", value_name = "ID=VALUE")]
    tol: Vec<String>,
    /// Output format: json or table.
    #[arg(long, default_value = "table", env = "KLAB_FORMAT")]
    format: String,
    /// Write the report here instead of stdout.
    #[arg(long, env = "KLAB_OUT")]
    out: Option<PathBuf>,
}

fn parse_tols(specs: &[String]) -> Result<BTreeMap<String, f64>, GeomError> {
    let mut out = BTreeMap::new();
    for s in specs {
        let (id, val) = s
            .split_once('=')
            .ok_or_else(|| GeomError::Usage(format!("--tol expects ID=VALUE, got `{s}`")))?;
        let val: f64 = val
            .parse()
            .map_err(|_| GeomError::Usage(format!("invalid tolerance value in `{s}`")))?;
        out.insert(id.to_string(), val);
    }
    Ok(out)
}

fn resolve_manifold(arg: &str) -> Result<ManifoldSpec, GeomError> {
    if let Some(spec) = ManifoldSpec::builtin(arg) {
        return Ok(spec);
    }
    let path = PathBuf::from(arg);
    if !path.exists() {
        return Err(GeomError::Usage(format!(
            "`{arg}` is neither a builtin manifold nor an existing file"
        )));
    }
    let text = std::fs::read_to_string(&path)?;
    ManifoldSpec::from_json(&text)
}

fn run(args: &VerifyArgs) -> Result<bool, GeomError> {
    let format: ReportFormat = args.format.parse().map_err(GeomError::Usage)?;
    let mut cfg = SuiteConfig::new(resolve_manifold(&args.manifold)?);
    cfg.n_points = args.points;
    cfg.n_vectors = args.vectors;
    cfg.seed = args.seed;
    cfg.tol_overrides = parse_tols(&args.tol)?;
    let reports = run_suite(&cfg)?;
    match &args.out {
        Some(path) => {
            let file = std::fs::File::create(path)?;
            emit_report(&reports, format, file)?;
        }
        None => emit_report(&reports, format, std::io::stdout().lock())?,
    }
    Ok(suite_passed(&reports))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Cmd::Verify(args) = &cli.cmd;
    match run(args) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
