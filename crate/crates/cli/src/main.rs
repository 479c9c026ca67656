//! `pcurv`: batch analyses of foliations described in `.pcv` documents.

mod commands;
mod report;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pcurv::Document;

#[derive(Parser)]
#[command(name = "pcurv", version, about = "p-curvature, degeneracy divisors and Cartier transforms of foliations")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Coefficient ring overriding the document, e.g. `Fq:5^2`, `Fp:7`, `Q`, `Z`, `NR:a^2+1`.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Emit a versioned JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized steps.
    #[arg(long, global = true, default_value_t = 0xd157)]
    pub seed: u64,
}

#[derive(Args)]
struct Input {
    /// Document to read; standard input when absent.
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: p-curvature, degeneracy divisor, Cartier transform, kernel and invariance checks.
    Analyze(Input),
    /// Closedness class and Cartier transform.
    Cartier(Input),
    /// Degeneracy divisor and the degree bookkeeping.
    Degeneracy(Input),
    /// Compare the degeneracy divisor of a pullback with the ramification prediction.
    Pullback(Input),
    /// Compare the degeneracy divisor of a restriction with the different prediction.
    Restrict(Input),
    /// Reduce an integral model modulo every prime up to a bound.
    Scan {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 13)]
        pmax: u64,
        /// Minimal polynomial in `a` replacing the document's number ring.
        #[arg(long)]
        minpoly: Option<String>,
        /// Model document, as an alternative to the positional file.
        #[arg(long)]
        model_file: Option<PathBuf>,
    },
    /// Minimal degree of a codimension-two subdistribution on projective space.
    Distmin2 {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        delta_max: Option<u32>,
        /// Writes the witness 2-form to this file.
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Integrability defect `w ^ dw`, with its integer content over Z.
    Defect(Input),
}

fn read_document(path: Option<&PathBuf>) -> anyhow::Result<Document> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| anyhow::anyhow!("{}: {e}", p.display()))?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    Document::parse(&text).map_err(lib_error)
}

pub fn lib_error(e: pcurv::Error) -> anyhow::Error {
    anyhow::anyhow!("[{}] {e}", e.module())
}

fn run(cli: Cli) -> anyhow::Result<report::Report> {
    use commands::Task;
    let g = &cli.global;
    let (task, path) = match &cli.command {
        Command::Analyze(i) => (Task::Analyze, i.file.as_ref()),
        Command::Cartier(i) => (Task::Cartier, i.file.as_ref()),
        Command::Degeneracy(i) => (Task::Degeneracy, i.file.as_ref()),
        Command::Pullback(i) => (Task::Pullback, i.file.as_ref()),
        Command::Restrict(i) => (Task::Restrict, i.file.as_ref()),
        Command::Defect(i) => (Task::Defect, i.file.as_ref()),
        Command::Distmin2 { input, delta_max, witness_out } => {
            (Task::Distmin { delta_max: *delta_max, witness_out: witness_out.clone() }, input.file.as_ref())
        }
        Command::Scan { input, pmax, minpoly, model_file } => {
            if input.file.is_some() && model_file.is_some() {
                anyhow::bail!("pass the model either positionally or with --model-file, not both");
            }
            (Task::Scan { pmax: *pmax, minpoly: minpoly.clone() }, input.file.as_ref().or(model_file.as_ref()))
        }
    };
    let doc = read_document(path)?;
    commands::dispatch(&doc, g, task)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.global.json;
    match run(cli) {
        Ok(r) => {
            print!("{}", r.render(json));
            if r.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
