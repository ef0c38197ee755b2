use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use welded::coloring::{phi_g_to_a, pi1_presentation};
use welded::gauss::{ascending_form, horizontal_form, random_diagram};
use welded::milnor::{milnor_filtration_order, milnor_mu, milnor_table};
use welded::{aut_equal, Error, GaussDiagram};

mod fuzz;

#[derive(Parser)]
#[command(name = "welded", version, about = "Welded string links as Gauss diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a diagram file and list every structural problem.
    Validate { file: PathBuf },
    /// Rewrite a diagram into ascending or horizontal form.
    Normalize {
        #[arg(long, value_enum)]
        mode: Mode,
        /// Recompute the invariant of the output and compare it with the input's.
        #[arg(long)]
        certify: bool,
        file: PathBuf,
    },
    /// Print the conjugating automorphism of the reduced free group as JSON.
    Invariant { file: PathBuf },
    /// Decide link-homotopy of two diagrams. Exit 0 if equivalent, 1 if not.
    Equiv { first: PathBuf, second: PathBuf },
    /// Milnor invariants as JSON.
    Milnor {
        /// A single index such as `1,2,3`.
        #[arg(long, value_delimiter = ',', conflicts_with = "all_upto", required_unless_present = "all_upto")]
        index: Option<Vec<usize>>,
        /// Every invariant of length 2 through K.
        #[arg(long, value_name = "K")]
        all_upto: Option<usize>,
        file: PathBuf,
    },
    /// The Wirtinger-type presentation of the group as JSON.
    Pi1 { file: PathBuf },
    /// Print a seeded random diagram.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        arrows: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the move-invariance battery on random diagrams.
    Fuzz {
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Ascending,
    Horizontal,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<GaussDiagram, Failure> {
    let text = read_text(path)?;
    GaussDiagram::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Writes to stdout, treating a closed pipe as a normal end of output.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_json(v: &Value) {
    emit(&format!("{}\n", serde_json::to_string_pretty(v).expect("serializable")));
}

fn number(c: &num_bigint::BigInt) -> Value {
    match i64::try_from(c) {
        Ok(v) => json!(v),
        Err(_) => json!(c.to_string()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Validate { file } => {
            let text = read_text(&file)?;
            let g = GaussDiagram::parse_unchecked(&text)?;
            let problems = g.validate();
            if problems.is_empty() {
                emit("ok\n");
                return Ok(ExitCode::SUCCESS);
            }
            for p in &problems {
                emit(&format!("error: {p}\n"));
            }
            Ok(ExitCode::from(2))
        }
        Command::Normalize { mode, certify, file } => {
            let g = load(&file)?;
            let out = match mode {
                Mode::Ascending => ascending_form(&g)?,
                Mode::Horizontal => horizontal_form(&g)?,
            };
            if certify && !aut_equal(&phi_g_to_a(&g)?, &phi_g_to_a(&out)?)? {
                return Err(Failure::Internal("normal form has a different invariant".into()));
            }
            emit(&out.to_text());
            Ok(ExitCode::SUCCESS)
        }
        Command::Invariant { file } => {
            print_json(&phi_g_to_a(&load(&file)?)?.to_json());
            Ok(ExitCode::SUCCESS)
        }
        Command::Equiv { first, second } => {
            let (a, b) = (load(&first)?, load(&second)?);
            if aut_equal(&phi_g_to_a(&a)?, &phi_g_to_a(&b)?)? {
                emit("equivalent\n");
                Ok(ExitCode::SUCCESS)
            } else {
                emit("inequivalent\n");
                Ok(ExitCode::from(1))
            }
        }
        Command::Milnor { index, all_upto, file } => {
            let g = load(&file)?;
            if let Some(index) = index {
                print_json(&json!({ "I": index, "mu": number(&milnor_mu(&g, &index)?) }));
            } else if let Some(k) = all_upto {
                if k < 2 {
                    return Err(Failure::Input("--all-upto needs K ≥ 2".into()));
                }
                let table: Vec<Value> =
                    milnor_table(&g, k)?.iter().map(|(i, c)| json!({ "I": i, "mu": number(c) })).collect();
                let order = milnor_filtration_order(&g, k + 1)?;
                print_json(&json!({ "invariants": table, "filtration_order": order.to_string() }));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Pi1 { file } => {
            print_json(&pi1_presentation(&load(&file)?).to_json());
            Ok(ExitCode::SUCCESS)
        }
        Command::Random { n, arrows, seed } => {
            if n == 0 {
                return Err(Failure::Input("--n must be at least 1".into()));
            }
            emit(&random_diagram(n, arrows, seed).to_text());
            Ok(ExitCode::SUCCESS)
        }
        Command::Fuzz { trials, seed } => {
            let report = fuzz::run(trials, seed)?;
            let found = report.counterexample.is_some();
            print_json(&report.to_json());
            Ok(if found { ExitCode::from(3) } else { ExitCode::SUCCESS })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
