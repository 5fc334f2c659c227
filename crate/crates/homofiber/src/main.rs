use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use homofiber::document::SpaceDocument;
use homofiber::{simulate, verify, Error, OutputFormat, Result, RunConfig};
use homofiber_core::catalog;
use homofiber_core::homogeneous::Check;
use homofiber_core::BaseModel;

#[derive(Parser)]
#[command(
    name = "homofiber",
    version,
    about = "Charged-particle motion on homogeneous fibrations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the structural hypotheses of a space.
    #[command(allow_negative_numbers = true)]
    Validate(RunArgs),
    /// Write the closed-form trajectory.
    #[command(allow_negative_numbers = true)]
    Simulate(RunArgs),
    /// Check the trajectory against the equation of motion.
    #[command(allow_negative_numbers = true)]
    Verify(RunArgs),
    /// Built-in spaces.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    /// Print a built-in space as a space document.
    Export {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    JsonTree,
}

#[derive(Args)]
struct RunArgs {
    /// Catalog name or path to a space document.
    #[arg(long, default_value = "hopf1")]
    space: String,
    /// Fiber ratio (one value) or one weight per module; repeatable.
    #[arg(long, value_delimiter = ',')]
    lambda: Vec<f64>,
    /// Module pair `a,b` (1-based); `a` alone when m_b is empty.
    #[arg(long, value_parser = parse_pair)]
    pair: Option<(usize, Option<usize>)>,
    #[arg(long)]
    k: Option<f64>,
    /// Multiplier for the space's W.
    #[arg(long = "W-scale", default_value_t = 1.0)]
    w_scale: f64,
    /// Coefficients of Xa in the orthonormal basis of m_a.
    #[arg(long, value_delimiter = ',')]
    xa: Option<Vec<f64>>,
    /// Coefficients of Xb in the orthonormal basis of m_b.
    #[arg(long, value_delimiter = ',')]
    xb: Option<Vec<f64>>,
    #[arg(long, default_value_t = -2.0)]
    t0: f64,
    #[arg(long, default_value_t = 2.0)]
    t1: f64,
    #[arg(long, default_value_t = 25)]
    samples: usize,
    #[arg(long, default_value_t = 1e-4)]
    fd_step: f64,
    /// Residual tolerance; defaults to $HOMOFIBER_TOL or 1e-6.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Replace the curve by exp(tX)·exp(t(Y + εN)) for a seeded N in m_a.
    #[arg(long)]
    perturb: Option<f64>,
}

fn parse_pair(s: &str) -> std::result::Result<(usize, Option<usize>), String> {
    let parts: Vec<_> = s.split(',').map(str::trim).collect();
    let num = |p: &str| {
        p.parse::<usize>()
            .map_err(|e| format!("bad module index '{p}': {e}"))
    };
    match parts.as_slice() {
        [a] => Ok((num(a)?, None)),
        [a, b] => Ok((num(a)?, Some(num(b)?))),
        _ => Err("expected a,b".into()),
    }
}

impl RunArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            space: self.space.clone(),
            lambda: self.lambda.clone(),
            pair: self.pair,
            w_scale: self.w_scale,
            charge: self.k,
            xa: self.xa.clone(),
            xb: self.xb.clone(),
            t0: self.t0,
            t1: self.t1,
            samples: self.samples,
            fd_step: self.fd_step,
            tolerance: self.tol,
            seed: self.seed,
            format: match self.format {
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::JsonTree => OutputFormat::JsonTree,
            },
            perturb: self.perturb,
        }
    }
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|source| Error::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn check_line(name: &str, check: Option<Check>) -> String {
    match check {
        Some(c) => format!(
            "{name:<22} {}  worst {:e}",
            if c.passed { "ok  " } else { "FAIL" },
            c.worst_residual
        ),
        None => format!("{name:<22} n/a"),
    }
}

fn cmd_validate(args: &RunArgs) -> Result<bool> {
    let cfg = args.config();
    cfg.check()?;
    let entry = cfg.load_space()?;
    let sys = cfg.system(&entry)?;
    let report = homofiber_core::homogeneous::validate(
        sys.split(),
        Some(sys.pair()),
        Some(sys.w()),
        entry.tolerances(),
    )?;
    let mut text = format!(
        "space {}  dim g {}  dim h {}  modules {:?}  tolerance {:e}\n",
        entry.name(),
        report.dims.g,
        report.dims.h,
        report.dims.modules,
        report.tolerance
    );
    for (name, c) in [
        ("orthogonality", Some(report.orthogonality)),
        ("ad-invariance", Some(report.ad_invariance)),
        ("chain closure", Some(report.chain_closure)),
        ("fibration invariance", report.fibration_invariance),
        ("bracket condition", report.bracket_condition),
        ("W in center of h", report.center_membership),
    ] {
        text.push_str(&check_line(name, c));
        text.push('\n');
    }
    text.push_str(if report.all_passed() {
        "PASS\n"
    } else {
        "FAIL\n"
    });
    print!("{text}");
    if let Some(path) = &args.out {
        let mut json = serde_json::to_string_pretty(&report)?;
        json.push('\n');
        emit(Some(path), json.as_bytes())?;
    }
    Ok(report.all_passed())
}

fn cmd_simulate(args: &RunArgs) -> Result<bool> {
    let cfg = args.config();
    cfg.check()?;
    let entry = cfg.load_space()?;
    let (motion, _) = cfg.motion(&entry)?;
    let samples: Vec<_> = cfg
        .times()?
        .into_iter()
        .map(|t| motion.evaluate(t))
        .collect();
    emit(
        args.out.as_deref(),
        &simulate::render(&samples, cfg.format)?,
    )?;
    Ok(true)
}

fn cmd_verify(args: &RunArgs) -> Result<bool> {
    let report = verify::run(&args.config())?;
    eprint!("{}", report.summary());
    emit(args.out.as_deref(), report.to_json().as_bytes())?;
    Ok(report.passed)
}

fn cmd_catalog(action: &CatalogAction) -> Result<bool> {
    match action {
        CatalogAction::List => {
            let mut text = String::new();
            for name in catalog::NAMES {
                let e = catalog::by_name(name).expect("listed names resolve");
                let d = e.data();
                let model = match d.model {
                    Some(BaseModel::Vector(_)) => "vector",
                    Some(BaseModel::Orbit(_)) => "orbit",
                    None => "none",
                };
                let pair = d
                    .pair
                    .map(|p| match p.b {
                        Some(b) => format!("{},{}", p.a + 1, b + 1),
                        None => format!("{}", p.a + 1),
                    })
                    .unwrap_or_else(|| "-".into());
                text.push_str(&format!(
                    "{name:<12} n={}  dim g={:<2} dim h={:<2} modules={:?}  weights={:?}  pair={pair}  k={}  model={model}\n",
                    d.n,
                    e.split().g().dim(),
                    e.split().h().dim(),
                    e.split().module_dims(),
                    d.weights,
                    d.charge,
                ));
            }
            print!("{text}");
            Ok(true)
        }
        CatalogAction::Export { name, out } => {
            let entry = catalog::by_name(name).ok_or_else(|| Error::UnknownSpace(name.clone()))?;
            let mut json = SpaceDocument::from_entry(&entry).to_json();
            json.push('\n');
            emit(out.as_deref(), json.as_bytes())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Validate(a) => cmd_validate(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Catalog { action } => cmd_catalog(action),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
