use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use symfem::burgers::BurgersScheme;
use symfem::experiments::{
    run_burgers, run_burgers_equivariance_audit, run_convergence, run_invariance_audit, run_painleve_error_series,
    solve_ode, BurgersConfig, IvpSpec, ProblemId,
};
use symfem::ode::{SchemeId, Startup};
use symfem::Error;

#[derive(Parser)]
#[command(name = "symfem", version, about = "Symmetry-preserving finite element experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct IvpArgs {
    /// Integration interval as `a,b` (default: the problem's standard interval)
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true)]
    interval: Option<(f64, f64)>,
    /// u at the left end
    #[arg(long, allow_hyphen_values = true)]
    u0: Option<f64>,
    /// u_x at the left end
    #[arg(long, allow_hyphen_values = true)]
    ux0: Option<f64>,
    /// Start-up rule for u_1: euler, taylor2 or exponential (default depends on the scheme)
    #[arg(long)]
    startup: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// March one scheme on a uniform mesh and write k,x,u,exact
    Solve {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        scheme: String,
        /// Number of elements
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        ivp: IvpArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Relative l-infinity error over a ladder of resolutions and the fitted order
    Converge {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        scheme: String,
        #[arg(long, value_delimiter = ',', default_value = "10,20,40,80,160,320,640,1280")]
        n_list: Vec<usize>,
        #[command(flatten)]
        ivp: IvpArgs,
        /// Also write the table as JSON
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Randomized invariance audit; prints a JSON report
    Invariance {
        #[arg(long)]
        problem: String,
        /// ODE scheme, or galerkin|lagrangian|radaptive for burgers
        #[arg(long)]
        scheme: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Pointwise errors of both Painlevé schemes on [0,1] with dx = 0.01
    PainleveSeries {
        #[arg(long)]
        out: PathBuf,
    },
    /// Burgers run from a JSON config; writes <prefix>.csv and <prefix>.summary.json
    Burgers {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_prefix: PathBuf,
    },
}

fn parse_interval(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [a, b] = parts.as_slice() else {
        return Err(format!("expected `a,b`, got `{s}`"));
    };
    let a: f64 = a.trim().parse().map_err(|e| format!("bad left end: {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("bad right end: {e}"))?;
    Ok((a, b))
}

enum Failure {
    Config(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config() {
            Failure::Config(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Config(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>) -> Result<(), Failure> {
    let file = File::create(path).map_err(|e| io_failure(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w).and_then(|_| w.flush()).map_err(|e| io_failure(path, e))
}

fn ivp_spec(problem: ProblemId, args: &IvpArgs) -> Result<IvpSpec, Failure> {
    let mut ivp = IvpSpec::default_for(problem);
    if let Some(interval) = args.interval {
        ivp.interval = interval;
    }
    if let Some(u0) = args.u0 {
        ivp.u0 = u0;
    }
    if let Some(ux0) = args.ux0 {
        ivp.ux0 = ux0;
    }
    if let Some(s) = &args.startup {
        ivp.startup = Some(s.parse::<Startup>()?);
    }
    Ok(ivp)
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Print to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> Result<(), Failure> {
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::Config(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { problem, scheme, n, ivp, out } => {
            let problem: ProblemId = problem.parse()?;
            let scheme: SchemeId = scheme.parse()?;
            let spec = ivp_spec(problem, &ivp)?;
            let sol = solve_ode(problem, scheme, n, &spec)?;
            write_file(&out, |w| sol.write_csv(w))?;
            emit(&format!("relative l-infinity error: {:.6e}", sol.relative_error()?))?;
        }
        Command::Converge { problem, scheme, n_list, ivp, json } => {
            let problem: ProblemId = problem.parse()?;
            let scheme: SchemeId = scheme.parse()?;
            let spec = ivp_spec(problem, &ivp)?;
            let table = run_convergence(problem, scheme, &n_list, &spec)?;
            let mut text = String::from("n,h,rel_linf_error");
            for r in &table.rows {
                text.push_str(&format!("\n{},{:.16e},{:.16e}", r.n_elements, r.h, r.rel_linf_error));
            }
            text.push_str(&format!("\nfitted order: {:.6}", table.fitted_order));
            emit(&text)?;
            if let Some(path) = json {
                write_file(&path, |w| writeln!(w, "{}", to_json(&table)))?;
            }
        }
        Command::Invariance { problem, scheme, seed, samples } => {
            let problem: ProblemId = problem.parse()?;
            let report = if problem == ProblemId::Burgers {
                run_burgers_equivariance_audit(scheme.parse::<BurgersScheme>()?, seed, samples)?
            } else {
                run_invariance_audit(problem, scheme.parse()?, seed, samples)?
            };
            emit(&to_json(&report))?;
        }
        Command::PainleveSeries { out } => {
            let series = run_painleve_error_series()?;
            write_file(&out, |w| series.write_csv(w))?;
        }
        Command::Burgers { config, out_prefix } => {
            let text = fs::read_to_string(&config).map_err(|e| io_failure(&config, e))?;
            let cfg = BurgersConfig::from_json(&text)?;
            let result = run_burgers(&cfg)?;
            let csv = with_suffix(&out_prefix, ".csv");
            let summary = with_suffix(&out_prefix, ".summary.json");
            write_file(&csv, |w| result.trajectory.write_csv(w))?;
            write_file(&summary, |w| writeln!(w, "{}", to_json(&result.summary)))?;
            emit(&to_json(&result.summary))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}
