//! `nodal-fano`: runs the verification suites and prints a JSON report.
//!
//! Exit codes: 0 pass, 2 mismatch, 3 resample budget exhausted, 4 I/O or parse error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nodal_fano::curve::{CanonicalCurve, CurveError, CurveSpec};
use nodal_fano::exec::Exec;
use nodal_fano::report::{self, AllConfig, CheckRecord, CurveSource, Report, Status};
use nodal_fano::threefold::{SECANT_BOUND, SECANT_FIELD};

const EXIT_IO: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "nodal-fano", version, about = "Finite-field checks for nodal cubic threefolds and Sym² of genus-4 curves")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Curve spec JSON; without it a curve is searched for from the seed.
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// Characteristic of the base field [default: 7, or 3 for secants].
    #[arg(long, global = true)]
    prime: Option<u32>,
    /// Degree of the base field over the prime field.
    #[arg(long, global = true, default_value_t = 1)]
    ext: u32,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Largest extension degree used [default: 3, or 10 for secants].
    #[arg(long, global = true)]
    ext_bound: Option<u32>,
    /// Random trials per check.
    #[arg(long, global = true, default_value_t = 100)]
    trials: usize,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true, env = "NODAL_FANO_JOBS")]
    jobs: Option<usize>,
    /// Resample budget for degenerate draws.
    #[arg(long, global = true, default_value_t = 100)]
    budget: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Intersection numbers on Sym²C.
    Lattice {
        #[arg(long, default_value_t = 4)]
        genus: i64,
    },
    /// Class identities in the cohomology ring.
    Ring {
        /// Perturb one coefficient so the identities fail.
        #[arg(long)]
        perturb: bool,
    },
    /// Validate, count points on, or search for a canonical curve.
    #[command(subcommand)]
    Curve(CurveCmd),
    /// The nodal cubic threefold attached to the curve.
    #[command(subcommand)]
    Threefold(ThreefoldCmd),
    /// Evaluate divisor expressions on Sym²C.
    #[command(subcommand)]
    Divisor(DivisorCmd),
    /// Every suite, one aggregate report.
    ReportAll,
}

#[derive(Subcommand, Debug)]
enum CurveCmd {
    /// Certify smoothness of a spec.
    Validate,
    /// Point counts over F_{q^m}, m up to the extension bound.
    Count,
    /// Seeded search for a smooth cubic over the split quadric.
    Search,
}

#[derive(Subcommand, Debug)]
enum ThreefoldCmd {
    /// Construct X and certify the identity and the node.
    Build,
    /// Lines on X over the base field against the curve's point counts.
    Census,
    /// Common secants of sampled chord pairs.
    Secants {
        #[arg(long, default_value_t = 5)]
        pairs: usize,
    },
    /// Line incidence against coplanarity of the pairs on the curve.
    Incidence,
}

#[derive(Subcommand, Debug)]
enum DivisorCmd {
    /// Normal form, e.g. `Trace(D1)`.
    Reduce { expr: String },
    /// Linear equivalence of two expressions.
    Equiv { lhs: String, rhs: String },
    /// Pullback along j_p (`--point`) or γ_i (`--gamma`).
    Pullback {
        expr: String,
        #[arg(long, conflicts_with = "gamma", required_unless_present = "gamma")]
        point: Option<String>,
        #[arg(long)]
        gamma: Option<u8>,
    },
}

enum Failure {
    Io(String),
}

fn exec_for(jobs: Option<usize>) -> Exec {
    match jobs {
        Some(1) => Exec::Sequential,
        #[cfg(feature = "parallel")]
        Some(n) => {
            // the global pool can only be sized once; later calls keep the first size
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            Exec::Parallel
        }
        _ => Exec::default(),
    }
}

fn read_spec(path: &PathBuf) -> Result<CurveSpec, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn source(run: &RunArgs, default_prime: u32, bound: u32) -> Result<CurveSource, Failure> {
    let spec = run.spec.as_ref().map(read_spec).transpose()?;
    Ok(CurveSource { spec, prime: run.prime.unwrap_or(default_prime), ext: run.ext, seed: run.seed, budget: run.budget, bound })
}

/// The curve of the run, or the records explaining why there is none.
fn curve(src: &CurveSource, exec: Exec) -> Result<CanonicalCurve, Vec<CheckRecord>> {
    match report::load_curve(src, exec) {
        Ok((c, _)) => Ok(c),
        Err(_) => Err(vec![match &src.spec {
            Some(spec) => report::validate_record(spec, src.seed, src.bound, exec),
            None => report::search_record(src, exec),
        }]),
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let r = &cli.run;
    let exec = exec_for(r.jobs);
    let bound = r.ext_bound.unwrap_or(3);
    let seed = r.seed;
    let records = match &cli.command {
        Command::Lattice { genus } => report::lattice_suite(*genus),
        Command::Ring { perturb } => report::ring_suite(*perturb),
        Command::Curve(cmd) => {
            let src = source(r, 7, bound)?;
            match cmd {
                CurveCmd::Validate => match &src.spec {
                    Some(spec) => vec![report::validate_record(spec, seed, bound, exec)],
                    None => vec![report::search_record(&src, exec)],
                },
                CurveCmd::Count => match curve(&src, exec) {
                    Ok(c) => report::count_records(&c, seed, bound, exec),
                    Err(recs) => recs,
                },
                CurveCmd::Search => vec![report::search_record(&src, exec)],
            }
        }
        Command::Threefold(cmd) => {
            let (p, b) = match cmd {
                ThreefoldCmd::Secants { .. } => (SECANT_FIELD.0, r.ext_bound.unwrap_or(SECANT_BOUND)),
                _ => (7, bound),
            };
            // smoothness is always certified to degree 3; `b` bounds the secant weights
            let src = source(r, p, 3)?;
            match curve(&src, exec) {
                Err(recs) => recs,
                Ok(c) => match cmd {
                    ThreefoldCmd::Build => vec![report::build_record(&c, seed)],
                    ThreefoldCmd::Census => vec![report::census_record(&c, seed, exec)],
                    ThreefoldCmd::Secants { pairs } => report::secant_records(&c, seed, *pairs, b, r.budget, exec),
                    ThreefoldCmd::Incidence => vec![report::incidence_record(&c, seed, r.trials, r.budget)],
                },
            }
        }
        Command::Divisor(cmd) => {
            let query = match cmd {
                DivisorCmd::Reduce { expr } => expr.clone(),
                DivisorCmd::Equiv { lhs, rhs } => format!("{lhs} ~ {rhs}"),
                DivisorCmd::Pullback { expr, point: Some(p), .. } => format!("jpull({expr}, {p})"),
                DivisorCmd::Pullback { expr, gamma, .. } => format!("gpull({expr}, {})", gamma.unwrap_or(1)),
            };
            vec![report::divisor_record(&query).map_err(|e| Failure::Io(format!("{query}: {e}")))?]
        }
        Command::ReportAll => {
            let cfg = AllConfig {
                source: source(r, 7, bound)?,
                trials: r.trials,
                secant_bound: r.ext_bound.map_or(SECANT_BOUND, |b| b.max(SECANT_BOUND)),
            };
            match report::report_all(&cfg, exec) {
                Ok(rep) => return Ok(rep),
                Err(CurveError::ResampleBudget(b)) => vec![exhausted("report_all.curve", seed, b)],
                Err(e) => return Err(Failure::Io(e.to_string())),
            }
        }
    };
    Ok(Report::new(records))
}

fn exhausted(check: &str, seed: u64, budget: usize) -> CheckRecord {
    CheckRecord {
        check: check.into(),
        instance: report::Instance { curve_hash: None, seed: Some(seed) },
        parameters: serde_json::json!({ "budget": budget }),
        expected: serde_json::json!({ "smooth": true }),
        computed: serde_json::json!({ "error": format!("resample budget of {budget} exhausted") }),
        status: Status::Exhausted,
        resamples: budget as u64,
        runtime_ms: 0,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_IO);
        }
    };
    let json = report.to_json();
    match &cli.run.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(EXIT_IO);
            }
        }
        None => print!("{json}"),
    }
    if !report.failing.is_empty() {
        eprintln!("failing: {}", report.failing.join(", "));
    }
    ExitCode::from(report.exit_code() as u8)
}
