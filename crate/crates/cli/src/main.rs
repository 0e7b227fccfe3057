//! `finmeas`: solve the door/prisoner puzzles, run generic one-shot
//! inference on JSON observables, drive the Monte Carlo oracle, and run the
//! built-in invariant suite.
//!
//! Results go to stdout as exact-rational JSON (or `--format human`);
//! diagnostics go to stderr as one JSON object. Exit codes: 0 success,
//! 1 failed check group, 2 invalid input, 3 well-posed input whose answer
//! is degenerate (zero evidence, zero likelihood, no conditioning events).

mod check;
mod render;

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use finmeas::sim::{simulate, SimConfig};
use finmeas::{
    bayes_posterior, fisher_mle, Error, Event, MixedState, MontyHallSpec, Observable,
    PrisonersSpec, ProblemSpec, Scalar, Variant,
};

#[derive(Parser)]
#[command(name = "finmeas", version, about = "Exact one-shot measurements on finite state spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format for results on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Human,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a named puzzle and print the verdict.
    Solve(SolveArgs),
    /// Report all maximum-likelihood states for one observed event.
    Fisher(GenericArgs),
    /// Update a prior from one observed event.
    Bayes(GenericArgs),
    /// Simulate the generative story and tally utterances against states.
    Simulate(SimulateArgs),
    /// Run the invariant suite; prints one line per group, exits 1 on failure.
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    #[value(name = "monty_hall")]
    MontyHall,
    #[value(name = "three_prisoners")]
    ThreePrisoners,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Fisher,
    Bayes,
    #[value(name = "equal_probability")]
    EqualProbability,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Fisher => Variant::Fisher,
            VariantArg::Bayes => Variant::Bayes,
            VariantArg::EqualProbability => Variant::EqualProbability,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Which puzzle to solve.
    #[arg(long, value_enum, required_unless_present = "input")]
    problem: Option<Problem>,
    /// Inference rule to apply.
    #[arg(long, value_enum, required_unless_present = "input")]
    variant: Option<VariantArg>,
    /// The door you picked / the prisoner who asks. Default A1.
    #[arg(long, visible_alias = "asker")]
    picked: Option<String>,
    /// The door opened / the prisoner named for execution. Default A3.
    #[arg(long, visible_alias = "named")]
    opened: Option<String>,
    /// Prior over the three points: `1/2,1/4,1/4` or `[[1,2],[1,4],[1,4]]`.
    #[arg(long)]
    prior: Option<String>,
    /// Host/emperor bias toward the first openable label: `1/2` or `[1,2]`.
    #[arg(long)]
    alpha: Option<String>,
    /// Read a full problem spec as JSON from a file, or `-` for stdin.
    #[arg(long, conflicts_with_all = ["problem", "variant", "picked", "opened", "prior", "alpha"])]
    input: Option<String>,
}

#[derive(Args)]
struct GenericArgs {
    /// Observable JSON (`{"space":[...],"outcomes":[...],"effects":[[n,d],...]}`),
    /// a file path or `-` for stdin.
    #[arg(long)]
    observable: String,
    /// Observed event: comma-separated outcome labels.
    #[arg(long)]
    event: String,
    /// Prior weights, one per point: `1/3,1/3,1/3` or a JSON array of pairs.
    #[arg(long)]
    prior: Option<String>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Prior over the three doors.
    #[arg(long, default_value = "1/3,1/3,1/3")]
    prior: String,
    /// Host bias toward the first openable door.
    #[arg(long, default_value = "1/2")]
    alpha: String,
    /// Number of trials.
    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,
    /// RNG seed; identical seeds give bit-identical reports.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print the counts table as CSV instead of the full report.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct CheckArgs {
    /// Trials per simulation cell in the agreement group.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Seed for the randomized groups.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Also validate an observable JSON file as its own group.
    #[arg(long)]
    fixture: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            let diag =
                serde_json::to_string(&err.to_diagnostic()).expect("diagnostics serialize");
            eprintln!("{diag}");
            if err.is_degenerate_inference() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn run(cli: Cli) -> finmeas::Result<ExitCode> {
    match cli.command {
        Command::Solve(args) => {
            let spec = build_problem(&args)?;
            let verdict = spec.solve()?;
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string(&verdict.record()).expect("verdicts serialize")
                ),
                Format::Human => print!("{}", render::verdict(&verdict)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Fisher(args) => {
            if args.prior.is_some() {
                return Err(Error::PriorSuppliedForFisher);
            }
            let obs = read_observable(&args.observable)?;
            let res = fisher_mle(&obs, &parse_event(&args.event))?;
            match cli.format {
                Format::Json => {
                    let out = serde_json::json!({
                        "maximizers": res.maximizers,
                        "max": res.max_likelihood,
                    });
                    println!("{out}");
                }
                Format::Human => print!("{}", render::fisher(&res)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bayes(args) => {
            let obs = read_observable(&args.observable)?;
            let weights = parse_weights(&args.prior.ok_or(Error::PriorRequired)?)?;
            let prior = MixedState::new(obs.space().clone(), weights)?;
            let res = bayes_posterior(&obs, &prior, &parse_event(&args.event))?;
            match cli.format {
                Format::Json => {
                    let out = serde_json::json!({
                        "posterior": res.posterior.weights(),
                        "evidence": res.evidence,
                    });
                    println!("{out}");
                }
                Format::Human => print!("{}", render::bayes(&res)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate(args) => {
            let config = SimConfig::new(
                parse_prior(&args.prior)?,
                parse_scalar(&args.alpha)?,
                args.trials,
                args.seed,
            );
            let report = simulate(&config)?;
            if args.csv {
                print!("{}", report.counts_csv());
            } else {
                match cli.format {
                    Format::Json => println!(
                        "{}",
                        serde_json::to_string(&report).expect("reports serialize")
                    ),
                    Format::Human => print!("{}", render::sim_report(&report)),
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check(args) => {
            let groups = check::run_all(args.trials, args.seed, args.fixture.as_deref());
            let mut all_passed = true;
            for group in &groups {
                match &group.result {
                    Ok(()) => println!("[PASS] {}", group.name),
                    Err(msg) => {
                        all_passed = false;
                        println!("[FAIL] {}: {msg}", group.name);
                    }
                }
            }
            Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn build_problem(args: &SolveArgs) -> finmeas::Result<ProblemSpec> {
    if let Some(source) = &args.input {
        let text = read_input(source)?;
        return serde_json::from_str(&text)
            .map_err(|e| Error::MalformedInput(format!("problem spec: {e}")));
    }
    let variant = args.variant.expect("clap requires --variant without --input").into();
    let prior = args.prior.as_deref().map(parse_prior).transpose()?;
    let alpha = args.alpha.as_deref().map(parse_scalar).transpose()?;
    match args.problem.expect("clap requires --problem without --input") {
        Problem::MontyHall => {
            let mut spec = MontyHallSpec::new(variant);
            if let Some(picked) = &args.picked {
                spec.picked = picked.clone();
            }
            if let Some(opened) = &args.opened {
                spec.opened = opened.clone();
            }
            spec.prior = prior;
            if let Some(alpha) = alpha {
                spec.alpha = alpha;
            }
            Ok(ProblemSpec::MontyHall(spec))
        }
        Problem::ThreePrisoners => {
            let mut spec = PrisonersSpec::new(variant);
            if let Some(asker) = &args.picked {
                spec.asker = asker.clone();
            }
            if let Some(named) = &args.opened {
                spec.named_executed = named.clone();
            }
            spec.prior = prior;
            if let Some(alpha) = alpha {
                spec.alpha = alpha;
            }
            Ok(ProblemSpec::ThreePrisoners(spec))
        }
    }
}

/// Read a file's contents, with `-` meaning stdin.
fn read_input(source: &str) -> finmeas::Result<String> {
    if source == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::MalformedInput(format!("reading stdin: {e}")))?;
        Ok(text)
    } else {
        fs::read_to_string(source)
            .map_err(|e| Error::MalformedInput(format!("reading {source}: {e}")))
    }
}

fn read_observable(source: &str) -> finmeas::Result<Observable> {
    let text = read_input(source)?;
    serde_json::from_str(&text).map_err(|e| Error::MalformedInput(format!("observable: {e}")))
}

fn parse_event(text: &str) -> Event {
    text.split(',').map(str::trim).filter(|t| !t.is_empty()).map(String::from).collect()
}

/// A rational flag value: `2/3`, `0.25`, `4`, or the pair form `[2,3]`.
fn parse_scalar(text: &str) -> finmeas::Result<Scalar> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        serde_json::from_str(trimmed)
            .map_err(|e| Error::InvalidScalar(format!("`{trimmed}`: {e}")))
    } else {
        trimmed.parse()
    }
}

/// A weight-list flag value: comma-separated rationals or a JSON array.
fn parse_weights(text: &str) -> finmeas::Result<Vec<Scalar>> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        serde_json::from_str(trimmed)
            .map_err(|e| Error::MalformedInput(format!("weights `{trimmed}`: {e}")))
    } else {
        trimmed.split(',').map(parse_scalar).collect()
    }
}

fn parse_prior(text: &str) -> finmeas::Result<[Scalar; 3]> {
    let weights = parse_weights(text)?;
    <[Scalar; 3]>::try_from(weights).map_err(|w| {
        Error::MalformedInput(format!("prior needs exactly three entries, got {}", w.len()))
    })
}
