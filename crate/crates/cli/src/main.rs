use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Parser, Subcommand};
use zeckauto::interspersion::{ArraySpec, BUILTIN_NAMES};
use zeckauto_cli::acceptance::{self, Context};
use zeckauto_cli::script::{Outcome, Session};
use zeckauto_cli::store::Store;
use zeckauto_cli::{array_text, base_registry, guess_from_text, prove};

#[derive(Parser)]
#[command(name = "zeckauto", version, about = "First-order proofs over Zeckendorf representations")]
struct Cli {
    /// Directory of stored automata (`<name>.aut`).
    #[arg(long, global = true, default_value = "store")]
    store: PathBuf,
    /// Cap the exhaustive bounds used to certify the base relations.
    #[arg(long, global = true)]
    limit: Option<u64>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a script of def/eval/reg/concat/alphabet commands.
    Run { script: PathBuf },
    /// Guess and prove the column automata of a built-in array.
    Prove {
        array: String,
        /// Column-1 terms to guess from.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Print the top-left corner of a built-in array.
    Array {
        name: String,
        #[arg(long, default_value_t = 10)]
        rows: usize,
        #[arg(long, default_value_t = 10)]
        cols: usize,
        #[arg(long)]
        tsv: bool,
    },
    /// Guess an automaton from `<i> <value>` lines.
    Guess {
        #[arg(long)]
        samples: PathBuf,
        /// Store the result under this name instead of printing it.
        #[arg(long)]
        name: Option<String>,
        #[arg(long, default_value_t = 2)]
        max_pad: usize,
        #[arg(long, default_value_t = 256)]
        budget: usize,
    },
    /// Print a stored or base automaton in DOT.
    ExportDot { name: String },
    /// Run the acceptance checks.
    Selftest,
}

/// Outcome of a command that ran to completion: did everything hold?
type Verdict = bool;

fn builtin(name: &str) -> Result<ArraySpec> {
    ArraySpec::builtin(name).map_err(|e| anyhow::anyhow!("{e}; built-in arrays: {}", BUILTIN_NAMES.join(", ")))
}

fn run(cli: Cli) -> Result<Verdict> {
    match cli.command {
        Cmd::Run { script } => {
            let src = std::fs::read_to_string(&script).with_context(|| script.display().to_string())?;
            let store = Store::open(&cli.store)?;
            let mut reg = base_registry(cli.limit)?;
            store.load_into(&mut reg)?;
            let mut session = Session::new(reg, Some(store));
            let outcomes = session
                .run(&src, |o| println!("{o}"))
                .map_err(|e| anyhow::Error::new(e).context(script.display().to_string()))?;
            Ok(outcomes.iter().all(|o| !matches!(o, Outcome::Evaluated { value: false, .. })))
        }
        Cmd::Prove { array, samples } => {
            let spec = builtin(&array)?;
            let base = base_registry(cli.limit)?;
            let proof = match prove(&spec, samples, &base) {
                Ok(p) => p,
                Err(e) => {
                    println!("{array} FAIL {e}");
                    return Ok(false);
                }
            };
            print!("{}", proof.report);
            if proof.report.fully_verified() {
                match proof.oracle_mismatch {
                    None => println!("{array}.oracle PASS columns 1-3 match the generator for i <= {}", zeckauto_cli::ORACLE_ROWS),
                    Some((i, j)) => println!("{array}.oracle FAIL column {j} disagrees at row {i}"),
                }
                let store = Store::open(&cli.store)?;
                for j in 1..=3 {
                    let name = match j {
                        1 => &proof.report.names.col1,
                        2 => &proof.report.names.col2,
                        _ => &proof.report.names.col3,
                    };
                    store.save(name, proof.report.column(j).expect("built"))?;
                }
            }
            Ok(proof.passed())
        }
        Cmd::Array { name, rows, cols, tsv } => {
            builtin(&name)?;
            print!("{}", array_text(&name, rows, cols, tsv)?);
            Ok(true)
        }
        Cmd::Guess { samples, name, max_pad, budget } => {
            let text = std::fs::read_to_string(&samples).with_context(|| samples.display().to_string())?;
            let dfa = match guess_from_text(&text, max_pad, budget) {
                Ok(d) => d,
                Err(e @ zeckauto::InferenceError::Parse { .. }) => return Err(e.into()),
                Err(e) => {
                    eprintln!("guess failed: {e}");
                    return Ok(false);
                }
            };
            match name {
                Some(n) => {
                    Store::open(&cli.store)?.save(&n, &dfa)?;
                    println!("{n}: {} states", dfa.live_state_count());
                }
                None => print!("{}", dfa.to_text()),
            }
            Ok(true)
        }
        Cmd::ExportDot { name } => {
            let dfa = match Store::open(&cli.store)?.load(&name)? {
                Some(d) => d,
                None => match base_registry(cli.limit)?.get(&name) {
                    Some(d) => d.clone(),
                    None => bail!("no automaton `{name}` in {} or among the base relations", cli.store.display()),
                },
            };
            print!("{}", dfa.to_dot(&name));
            Ok(true)
        }
        Cmd::Selftest => {
            let mut ctx = Context::new(base_registry(cli.limit)?);
            let verdicts = acceptance::run_all(&mut ctx, |v| println!("{v}"));
            Ok(verdicts.iter().all(|v| v.passed))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
