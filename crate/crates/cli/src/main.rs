use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sperner_cake::io::{parse_instance, parse_problem, solve_result_json};
use sperner_cake::preferences::{default_samples, validate_full_division};
use sperner_cake::rational_geometry::{format_rational, parse_rational};
use sperner_cake::solver::{default_max_depth, solve, SolveOptions, Status};
use sperner_cake::sperner_engine::{find_fully_labeled, SearchMode};
use sperner_cake::triangulation::DEFAULT_SIMPLEX_BUDGET;
use sperner_cake::verify::{run_lemma_suite, run_theorem_suite, LemmaConfig, TheoremConfig};
use sperner_cake::{Error, Triangulation};

const EXIT_INPUT: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_ASSUMPTION: u8 = 3;
const EXIT_THEOREM: u8 = 4;

#[derive(Parser)]
#[command(name = "sperner-cake", version, about = "Envy-free cake division and symmetric Sperner checks in exact arithmetic")]
struct Cli {
    /// Write JSON here instead of stdout.
    #[arg(long, global = true, env = "SPERNER_CAKE_OUTPUT")]
    output: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "SPERNER_CAKE_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find an (approximately) envy-free division for a problem file.
    Solve(SolveArgs),
    /// Determinant-sum and projection-identity checks on random labelings.
    VerifyLemma(LemmaArgs),
    /// Fully-labeled simplex search on random symmetric labelings.
    VerifyTheorem(TheoremArgs),
    /// Statistics of an iterated barycentric subdivision.
    Subdivide(SubdivideArgs),
    /// Parse a problem file and spot-check the full division assumption.
    CheckInput(InputArgs),
    /// Re-run the search on a dumped instance.
    Replay(InputArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Det,
    Matching,
}

#[derive(Args)]
struct InputArgs {
    #[arg(long, env = "SPERNER_CAKE_INPUT")]
    input: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, env = "SPERNER_CAKE_INPUT")]
    input: PathBuf,
    /// Default 7 for two or three players, 2 otherwise.
    #[arg(long, env = "SPERNER_CAKE_MAX_DEPTH")]
    max_depth: Option<usize>,
    /// Refine at least this far even if the target is met earlier.
    #[arg(long, env = "SPERNER_CAKE_MIN_DEPTH", default_value_t = 1)]
    min_depth: usize,
    #[arg(long, env = "SPERNER_CAKE_TARGET_GAP", default_value = "1/20")]
    target_gap: String,
    #[arg(long, env = "SPERNER_CAKE_BUDGET", default_value_t = DEFAULT_SIMPLEX_BUDGET)]
    budget: u128,
    #[arg(long, env = "SPERNER_CAKE_MODE", value_enum, default_value_t = Mode::Det)]
    mode: Mode,
    /// Where to dump the instance if no fully-labeled simplex turns up.
    #[arg(long, env = "SPERNER_CAKE_REPRO", default_value = "sperner-cake-repro.json")]
    repro: PathBuf,
}

#[derive(Args)]
struct LemmaArgs {
    #[arg(long, env = "SPERNER_CAKE_N")]
    n: usize,
    #[arg(long, env = "SPERNER_CAKE_DEPTH", default_value_t = 1)]
    depth: usize,
    #[arg(long, env = "SPERNER_CAKE_TRIALS", default_value_t = 50)]
    trials: usize,
    #[arg(long, env = "SPERNER_CAKE_IDENTITY_TRIALS", default_value_t = 1000)]
    identity_trials: usize,
    #[arg(long, env = "SPERNER_CAKE_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, env = "SPERNER_CAKE_BUDGET", default_value_t = DEFAULT_SIMPLEX_BUDGET)]
    budget: u128,
    /// Move one vertex label off its supporting face (negative control).
    #[arg(long)]
    corrupt: bool,
}

#[derive(Args)]
struct TheoremArgs {
    #[arg(long, env = "SPERNER_CAKE_N")]
    n: usize,
    #[arg(long, env = "SPERNER_CAKE_DEPTH", default_value_t = 1)]
    depth: usize,
    #[arg(long, env = "SPERNER_CAKE_TRIALS", default_value_t = 100)]
    trials: usize,
    #[arg(long, env = "SPERNER_CAKE_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, env = "SPERNER_CAKE_BUDGET", default_value_t = DEFAULT_SIMPLEX_BUDGET)]
    budget: u128,
    #[arg(long, env = "SPERNER_CAKE_REPRO", default_value = "sperner-cake-repro.json")]
    repro: PathBuf,
}

#[derive(Args)]
struct SubdivideArgs {
    #[arg(long, env = "SPERNER_CAKE_N")]
    n: usize,
    #[arg(long, env = "SPERNER_CAKE_DEPTH", default_value_t = 1)]
    depth: usize,
    #[arg(long, env = "SPERNER_CAKE_BUDGET", default_value_t = DEFAULT_SIMPLEX_BUDGET)]
    budget: u128,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse(_) | Error::Argument(_) => EXIT_INPUT,
        Error::Budget { .. } => EXIT_BUDGET,
        Error::TheoremViolation { .. } => EXIT_THEOREM,
        Error::Invariant(_)
        | Error::AffineHull { .. }
        | Error::Assumption { .. }
        | Error::Unsupported(_)
        | Error::Precondition(_) => EXIT_ASSUMPTION,
    }
}

fn fail(err: Error, repro: Option<&Path>) -> Failure {
    let code = exit_code(&err);
    let mut message = err.to_string();
    if let (Error::TheoremViolation { instance, .. }, Some(path)) = (&err, repro) {
        match fs::write(path, instance) {
            Ok(()) => message.push_str(&format!("; instance written to {}", path.display())),
            Err(e) => message.push_str(&format!("; could not write {}: {e}", path.display())),
        }
    }
    Failure::new(code, message)
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_INPUT, format!("cannot read {}: {e}", path.display())))
}

fn emit(output: Option<&Path>, value: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n";
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new(EXIT_INPUT, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_solve(args: &SolveArgs, output: Option<&Path>) -> Result<u8, Failure> {
    let problem = parse_problem(&read_input(&args.input)?).map_err(|e| fail(e, None))?;
    let target_gap = parse_rational(&args.target_gap)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("--target-gap: {e}")))?;
    let options = SolveOptions {
        max_depth: args.max_depth.unwrap_or_else(|| default_max_depth(problem.n())),
        min_depth: args.min_depth,
        target_gap,
        simplex_budget: args.budget,
        mode: match args.mode {
            Mode::Det => SearchMode::Det,
            Mode::Matching => SearchMode::Matching,
        },
    };
    let result = solve(&problem, &options).map_err(|e| fail(e, Some(&args.repro)))?;
    emit(output, &solve_result_json(&result))?;
    Ok(if result.status == Status::BudgetExhausted { EXIT_BUDGET } else { 0 })
}

fn cmd_verify_lemma(args: &LemmaArgs, output: Option<&Path>) -> Result<u8, Failure> {
    let config = LemmaConfig {
        n: args.n,
        depth: args.depth,
        trials: args.trials,
        identity_trials: args.identity_trials,
        seed: args.seed,
        budget: args.budget,
        corrupt: args.corrupt,
    };
    let report = run_lemma_suite(&config).map_err(|e| fail(e, None))?;
    emit(output, &report.to_json())?;
    Ok(if report.passed() { 0 } else { EXIT_ASSUMPTION })
}

fn cmd_verify_theorem(args: &TheoremArgs, output: Option<&Path>) -> Result<u8, Failure> {
    let config = TheoremConfig {
        n: args.n,
        depth: args.depth,
        trials: args.trials,
        seed: args.seed,
        budget: args.budget,
    };
    let report = run_theorem_suite(&config).map_err(|e| fail(e, Some(&args.repro)))?;
    emit(output, &report.to_json())?;
    if let Some((trial, instance)) = report.violations.first() {
        fs::write(&args.repro, instance.to_string())
            .map_err(|e| Failure::new(EXIT_THEOREM, format!("cannot write {}: {e}", args.repro.display())))?;
        return Err(Failure::new(
            EXIT_THEOREM,
            format!("trial {trial} has no fully-labeled simplex; instance written to {}", args.repro.display()),
        ));
    }
    Ok(if report.passed() { 0 } else { EXIT_ASSUMPTION })
}

fn cmd_subdivide(args: &SubdivideArgs, output: Option<&Path>) -> Result<u8, Failure> {
    let t = Triangulation::sd_pow(args.n, args.depth, args.budget).map_err(|e| fail(e, None))?;
    let owner_valid = t.owner_labeling().ok().map(|o| t.check_owner(&o));
    emit(
        output,
        &json!({
            "n": t.n(),
            "depth": t.depth(),
            "vertices": t.vertex_count(),
            "simplices": t.simplex_count(),
            "mesh": format_rational(&t.mesh_size()),
            "nice": t.is_nice(),
            "supports_comparable": t.supports_comparable(),
            "owner_valid": owner_valid,
        }),
    )?;
    Ok(0)
}

fn cmd_check_input(args: &InputArgs, output: Option<&Path>) -> Result<u8, Failure> {
    let problem = parse_problem(&read_input(&args.input)?).map_err(|e| fail(e, None))?;
    let samples = default_samples(problem.n());
    let mut players = Vec::new();
    let mut code = 0;
    for (i, p) in problem.players().iter().enumerate() {
        let verdict = match validate_full_division(p, problem.n(), &samples) {
            Ok(()) => json!({ "player": i + 1, "type": p.describe(), "full_division": "ok" }),
            Err(v) => {
                code = EXIT_ASSUMPTION;
                log::error!("player {}: validate_full_division failed at {}: {}", i + 1, v.point, v.reason);
                json!({ "player": i + 1, "type": p.describe(), "full_division": v.reason, "at": v.point.to_string() })
            }
        };
        players.push(verdict);
    }
    emit(output, &json!({ "n": problem.n(), "samples": samples.len(), "players": players }))?;
    Ok(code)
}

fn cmd_replay(args: &InputArgs, output: Option<&Path>) -> Result<u8, Failure> {
    let (t, labeling) = parse_instance(&read_input(&args.input)?).map_err(|e| fail(e, None))?;
    let det = find_fully_labeled(&t, &labeling, SearchMode::Det).map_err(|e| fail(e, None))?;
    let matching = find_fully_labeled(&t, &labeling, SearchMode::Matching).map_err(|e| fail(e, None))?;
    let first = det.first().map(|w| json!({ "vertices": w.vertices, "picks": w.sdr.images() }));
    emit(
        output,
        &json!({
            "n": t.n(),
            "det_witnesses": det.len(),
            "matching_witnesses": matching.len(),
            "first": first,
        }),
    )?;
    Ok(if det.is_empty() { EXIT_THEOREM } else { 0 })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: --jobs: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    let output = cli.output.as_deref();
    let outcome = match &cli.command {
        Command::Solve(args) => cmd_solve(args, output),
        Command::VerifyLemma(args) => cmd_verify_lemma(args, output),
        Command::VerifyTheorem(args) => cmd_verify_theorem(args, output),
        Command::Subdivide(args) => cmd_subdivide(args, output),
        Command::CheckInput(args) => cmd_check_input(args, output),
        Command::Replay(args) => cmd_replay(args, output),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
