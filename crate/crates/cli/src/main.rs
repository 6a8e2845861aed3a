use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use toda2d::brackets::{bracket_terms_with, evaluate_bracket_with, tensor_bracket, CoordIndex, TensorRoute, Transcription};
use toda2d::hierarchy::{hamiltonian, integrate, toda_equation_check, FlowSpec, HamiltonianId};
use toda2d::io::{state_from_json, state_to_json, trajectory_to_json, JsonScalar};
use toda2d::sample::Sampler;
use toda2d::verify::{self, Config, Mode, Suite};
use toda2d::{Error, Family, LaxState, Rational, Scalar, TensorId};

/// Size of the random default state for `evolve`. Unit-size data leaves the
/// truncated higher flows within unit time.
const EVOLVE_AMPLITUDE: f64 = 0.5;

#[derive(Parser)]
#[command(name = "toda2d", version, about = "Poisson structures and flows of the 2D Toda lattice hierarchy")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Lattice size N.
    #[arg(long, global = true, default_value_t = 7)]
    n: usize,
    /// Stored depth M of L.
    #[arg(long, global = true, default_value_t = 4)]
    depth: i64,
    /// Stored depth M̄ of L̄.
    #[arg(long = "depth-bar", global = true, default_value_t = 3)]
    depth_bar: i64,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// exact or float. Defaults to exact, except for evolve and toda.
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Zero threshold in float mode.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Where to write the machine-readable output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite: myb, tensors, reduction, crosscheck, jacobi,
    /// pencil, recursion, zs, pushforward or all.
    Verify {
        suite: String,
        /// Override the per-suite sample count.
        #[arg(long)]
        samples: Option<usize>,
        /// Summation range of the third (u, ubar) bracket: corrected or printed.
        #[arg(long, default_value = "corrected")]
        transcription: String,
    },
    /// Print the term list of {a(n), b(m)}_k, its value and the tensor-route value.
    #[command(allow_negative_numbers = true)]
    Bracket {
        k: u8,
        a: String,
        #[arg(value_name = "N")]
        site_a: i64,
        b: String,
        #[arg(value_name = "M")]
        site_b: i64,
        /// State file; a seeded random state is used when absent.
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long, default_value = "corrected")]
        transcription: String,
    },
    /// Integrate a flow such as t1 or tbar2 with RK4.
    Evolve {
        flow: String,
        duration: f64,
        step: f64,
        #[arg(long)]
        state: Option<PathBuf>,
        /// Comma-separated Hamiltonians tracked along the trajectory.
        #[arg(long, default_value = "h1,h2,hbar1,hbar2")]
        ledger: String,
        /// Keep every stride-th step in the trajectory.
        #[arg(long, default_value_t = 100)]
        stride: usize,
    },
    /// Check the 2D Toda equation on random data by finite differences in t1, tbar1.
    Toda {
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// Amplitude of the random profile and base coordinates.
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
    },
    /// Import or export state files.
    #[command(subcommand)]
    State(StateCommand),
}

#[derive(Subcommand)]
enum StateCommand {
    /// Write a seeded random state.
    Export,
    /// Read a state file, print its shape and first Hamiltonians, and
    /// optionally rewrite it in the chosen mode.
    Import { file: PathBuf },
}

enum Failure {
    /// Bad input or configuration: exit status 2.
    Config(String),
    /// A check failed or the integrator gave up: exit status 1.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::StepRejected { .. } => Failure::Check(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let run = &cli.run;
    match &cli.command {
        Command::Verify {
            suite,
            samples,
            transcription,
        } => {
            let mut config = config(run, Mode::Exact)?;
            config.samples = *samples;
            config.transcription = parse_transcription(transcription)?;
            cmd_verify(suite, &config, run.out.as_deref())
        }
        Command::Bracket {
            k,
            a,
            site_a,
            b,
            site_b,
            state,
            transcription,
        } => {
            let config = config(run, Mode::Exact)?;
            let query = BracketQuery {
                k: TensorId::from_index(*k)?,
                a: coordinate(a, *site_a)?,
                b: coordinate(b, *site_b)?,
                transcription: parse_transcription(transcription)?,
            };
            match config.mode {
                Mode::Exact => cmd_bracket(&query, &config, |x| x.clone(), state.as_deref(), run.out.as_deref()),
                Mode::Float => cmd_bracket(&query, &config, |x| x.to_f64(), state.as_deref(), run.out.as_deref()),
            }
        }
        Command::Evolve {
            flow,
            duration,
            step,
            state,
            ledger,
            stride,
        } => {
            let config = float_config(run, "evolve")?;
            let flow: FlowSpec = flow.parse()?;
            let ledger = ledger
                .split(',')
                .filter(|s| !s.is_empty())
                .map(|s| s.trim().parse::<HamiltonianId>())
                .collect::<Result<Vec<_>, _>>()?;
            let initial = match state {
                Some(path) => load_state::<f64>(path)?,
                None => Sampler::new(config.seed).float_state(config.n, config.depth, config.depth_bar, EVOLVE_AMPLITUDE),
            };
            let traj = integrate(&[(flow, *duration, *step)], &initial, &ledger, *stride)?;
            let end = traj.last();
            println!("flow {flow} duration {duration} step {step}: {} snapshots", traj.snapshots.len());
            for (h, (d, v)) in ledger.iter().zip(traj.relative_drift().iter().zip(&end.hamiltonians)) {
                println!("{h} = {v:.15e} relative drift {d:.3e}");
            }
            if let Some(path) = &run.out {
                write_json(path, &trajectory_to_json(&traj))?;
            }
            Ok(true)
        }
        Command::Toda { step, amplitude } => {
            let config = float_config(run, "toda")?;
            let mut sampler = Sampler::new(config.seed);
            let u = sampler.float_profile(config.n, *amplitude);
            let base = sampler.float_state(config.n, config.depth, config.depth_bar, *amplitude);
            let full = toda_equation_check(&u, &base, *step)?;
            let half = toda_equation_check(&u, &base, step / 2.0)?;
            let ratio = full.relative_residual / half.relative_residual;
            println!("step {step:e} relative residual {:.3e}", full.relative_residual);
            println!("step {:e} relative residual {:.3e}", step / 2.0, half.relative_residual);
            println!("ratio {ratio:.2}");
            if let Some(path) = &run.out {
                write_json(
                    path,
                    &json!({
                        "step": step,
                        "residual": full.relative_residual,
                        "half_step_residual": half.relative_residual,
                        "ratio": ratio,
                        "mixed": full.mixed,
                        "expected": full.expected,
                    }),
                )?;
            }
            Ok(true)
        }
        Command::State(StateCommand::Export) => {
            let config = config(run, Mode::Exact)?;
            let st = Sampler::new(config.seed).state(config.n, config.depth, config.depth_bar);
            let v = match config.mode {
                Mode::Exact => state_to_json(&st),
                Mode::Float => state_to_json(&st.convert(|x| x.to_f64())),
            };
            emit(run.out.as_deref(), &v)?;
            Ok(true)
        }
        Command::State(StateCommand::Import { file }) => {
            let config = config(run, Mode::Exact)?;
            match config.mode {
                Mode::Exact => cmd_import::<Rational>(file, run.out.as_deref()),
                Mode::Float => cmd_import::<f64>(file, run.out.as_deref()),
            }
        }
    }
}

fn config(run: &RunArgs, default_mode: Mode) -> Result<Config, Failure> {
    let mode = match &run.mode {
        Some(m) => m.parse()?,
        None => default_mode,
    };
    let config = Config {
        n: run.n,
        depth: run.depth,
        depth_bar: run.depth_bar,
        seed: run.seed,
        mode,
        tol: run.tol,
        ..Config::default()
    };
    config.validate()?;
    Ok(config)
}

fn float_config(run: &RunArgs, command: &str) -> Result<Config, Failure> {
    let config = config(run, Mode::Float)?;
    if config.mode != Mode::Float {
        return Err(Failure::Config(format!("{command} runs in float mode only")));
    }
    Ok(config)
}

fn parse_transcription(s: &str) -> Result<Transcription, Failure> {
    match s {
        "corrected" => Ok(Transcription::Corrected),
        "printed" => Ok(Transcription::Printed),
        _ => Err(Failure::Config(format!("unknown transcription {s:?}, expected corrected or printed"))),
    }
}

fn coordinate(label: &str, site: i64) -> Result<CoordIndex, Failure> {
    let (family, index) = Family::parse_field(label)?;
    Ok(CoordIndex { family, index, site })
}

fn cmd_verify(suite: &str, config: &Config, out: Option<&Path>) -> Outcome {
    let suite: Suite = suite.parse()?;
    let report = verify::run(suite, config)?;
    print!("{}", report.text());
    if let Some(path) = out {
        write_json(path, &report.to_json())?;
    }
    Ok(report.passed())
}

struct BracketQuery {
    k: TensorId,
    a: CoordIndex,
    b: CoordIndex,
    transcription: Transcription,
}

fn cmd_bracket<S: JsonScalar>(
    q: &BracketQuery,
    config: &Config,
    lift: fn(&Rational) -> S,
    state: Option<&Path>,
    out: Option<&Path>,
) -> Outcome {
    let st: LaxState<S> = match state {
        Some(path) => load_state(path)?,
        None => Sampler::new(config.seed).state(config.n, config.depth, config.depth_bar).convert(lift),
    };
    let terms = bracket_terms_with(q.k, (q.a.family, q.a.index), (q.b.family, q.b.index), q.transcription)?;
    let value = evaluate_bracket_with(q.k, &q.a, &q.b, &st, q.transcription)?;
    let tensor = tensor_bracket(q.k, &q.a, &q.b, &st, TensorRoute::default_for(q.k))?;
    let label = |c: &CoordIndex, var: &str| format!("{}{}({var})", c.family.label(), c.index);
    println!("{{{}, {}}}_{} =", label(&q.a, "n"), label(&q.b, "m"), q.k.index());
    if terms.is_empty() {
        println!("  0");
    }
    for t in &terms {
        println!("  {}{t}", if t.coeff < 0 { "" } else { "+" });
    }
    println!("value at n={}, m={}: {}", q.a.site, q.b.site, show(&value));
    println!("tensor route: {}", show(&tensor));
    if let Some(path) = out {
        write_json(
            path,
            &json!({
                "k": q.k.index(),
                "a": q.a.to_string(),
                "b": q.b.to_string(),
                "terms": terms.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
                "value": value.to_json(),
                "tensor": tensor.to_json(),
            }),
        )?;
    }
    Ok(true)
}

fn cmd_import<S: JsonScalar>(file: &Path, out: Option<&Path>) -> Outcome {
    let st: LaxState<S> = load_state(file)?;
    println!("N={} M={} Mbar={}", st.period(), st.depth(), st.depth_bar());
    for h in [HamiltonianId::h(0), HamiltonianId::h(1), HamiltonianId::hbar(0), HamiltonianId::hbar(1)] {
        println!("{h} = {}", show(&hamiltonian(h, &st)?));
    }
    if let Some(path) = out {
        write_json(path, &state_to_json(&st))?;
    }
    Ok(true)
}

fn show<S: JsonScalar>(x: &S) -> String {
    match x.to_json() {
        Value::String(s) => s,
        v => v.to_string(),
    }
}

fn load_state<S: JsonScalar>(path: &Path) -> Result<LaxState<S>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    Ok(state_from_json(&v)?)
}

fn write_json(path: &Path, v: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).expect("serializable");
    fs::write(path, text + "\n").map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, v: &Value) -> Result<(), Failure> {
    match path {
        Some(p) => write_json(p, v),
        None => {
            println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
            Ok(())
        }
    }
}
