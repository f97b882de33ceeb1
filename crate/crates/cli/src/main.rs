mod commands;
mod verify;

use std::io::{ErrorKind, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hvoa::json::JsonField;
use hvoa::linalg::Vector;
use hvoa::scalars::{Approx, Backend, Gaussian, Tolerance};
use serde_json::Value;

#[derive(Parser)]
#[command(name = "hvoa", version, about = "Semi-conformal vectors of shifted Heisenberg vertex operator algebras")]
struct Cli {
    /// Scalar backend; defaults to the input document's "backend" field, then exact.
    #[arg(long, global = true, value_enum)]
    backend: Option<BackendArg>,
    /// Zero threshold for the approximate backend.
    #[arg(long, global = true, default_value_t = Tolerance::DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Ambient dimension d (a zero shift of this length when --h is absent).
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Shift vector, as a JSON array or comma-separated scalars such as "1,1/2+i,0".
    #[arg(long, global = true, allow_hyphen_values = true)]
    h: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Exact,
    Approx,
}

#[derive(Subcommand)]
pub(crate) enum Command {
    /// Test a pair {A, B, h} for semi-conformality.
    Check {
        input: Option<PathBuf>,
        /// Also run the Fock-space check up to this weight bound.
        #[arg(long)]
        fock: Option<u32>,
    },
    /// Print the stabilizer orbit label of a pair.
    Classify { input: Option<PathBuf> },
    /// Weight-one commutant Ker A of a pair.
    Commutant { input: Option<PathBuf> },
    /// The pair of ω_h − ω′.
    Complement { input: Option<PathBuf> },
    /// A maximal chain along the coordinate flag for --h.
    Chain,
    /// Hasse diagram of a list of pairs.
    Poset {
        input: Option<PathBuf>,
        /// Emit DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Central charge of {S, b} or {h} from input, or of ω_h for --h.
    Charge { input: Option<PathBuf> },
    /// Moduli class of --h.
    Moduli,
    /// Whether {Q, h} gives an automorphism of (V, ω_h).
    AutCheck { input: Option<PathBuf> },
    /// Apply L′(m) for W to a Fock vector: {W, m, v}.
    FockApply { input: Option<PathBuf> },
    /// An orthogonal map fixing h carrying p1 to p2: {p1, p2}.
    Witness { input: Option<PathBuf> },
    /// Run the seeded property suite and print a JSON report.
    Verify {
        /// Cases per property.
        #[arg(long, default_value_t = 20)]
        cases: usize,
        /// Deliberately break the Fock engine to check that the suite notices.
        #[arg(long, value_enum)]
        mutate: Option<Mutation>,
    },
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
pub(crate) enum Mutation {
    SignOfLinearTerm,
}

/// Resolved global settings shared by every command.
pub(crate) struct Ctx {
    pub tol: Tolerance,
    pub seed: u64,
    pub dim: Option<usize>,
    pub h: Option<String>,
}

impl Ctx {
    pub fn shift<F: JsonField>(&self) -> Result<Option<Vector<F>>> {
        let h = match &self.h {
            Some(raw) => Some(parse_shift(raw)?),
            None => self.dim.map(Vector::zeros),
        };
        if let (Some(h), Some(d)) = (&h, self.dim) {
            if h.dim() != d {
                bail!("--h has length {} but --dim is {d}", h.dim());
            }
        }
        Ok(h)
    }

    pub fn require_shift<F: JsonField>(&self) -> Result<Vector<F>> {
        self.shift()?.context("this command needs --h or --dim")
    }
}

fn parse_shift<F: JsonField>(raw: &str) -> Result<Vector<F>> {
    let value: Value = if raw.trim_start().starts_with('[') {
        serde_json::from_str(raw).context("--h is not valid JSON")?
    } else {
        Value::Array(raw.split(',').map(|s| Value::String(s.trim().to_string())).collect())
    };
    Ok(hvoa::json::vector_from_json(&value)?)
}

pub(crate) fn read_input(path: &Option<PathBuf>) -> Result<Value> {
    let text = match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
            s
        }
    };
    serde_json::from_str(&text).context("input is not valid JSON")
}

/// The document a command reads. `charge` reads one only when given a path or no shift flags.
fn input_path(cmd: &Command, shift_given: bool) -> Option<&Option<PathBuf>> {
    match cmd {
        Command::Check { input, .. }
        | Command::Classify { input }
        | Command::Commutant { input }
        | Command::Complement { input }
        | Command::Poset { input, .. }
        | Command::AutCheck { input }
        | Command::FockApply { input }
        | Command::Witness { input } => Some(input),
        Command::Charge { input } => (input.is_some() || !shift_given).then_some(input),
        Command::Chain | Command::Moduli | Command::Verify { .. } => None,
    }
}

/// Writes to stdout, treating a closed pipe as success.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() == ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    let ctx = Ctx {
        tol: Tolerance::new(cli.epsilon)?,
        seed: cli.seed,
        dim: cli.dim,
        h: cli.h,
    };

    if let Command::Verify { cases, mutate } = cli.command {
        let max_dim = ctx.dim.unwrap_or(3);
        let report = verify::run(ctx.seed, max_dim, cases, mutate);
        emit(&format!("{}\n", serde_json::to_string_pretty(&report.to_json())?))?;
        eprintln!("verify: {} properties in {:.2}s", report.properties.len(), report.elapsed.as_secs_f64());
        return Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE });
    }

    let doc = input_path(&cli.command, ctx.h.is_some() || ctx.dim.is_some())
        .map(read_input)
        .transpose()?;
    let backend = match (cli.backend, doc.as_ref().and_then(|d| d.get("backend")).and_then(Value::as_str)) {
        (Some(BackendArg::Exact), _) => Backend::Exact,
        (Some(BackendArg::Approx), _) => Backend::Approx,
        (None, Some(name)) => name.parse()?,
        (None, None) => Backend::Exact,
    };
    let doc = doc.unwrap_or(Value::Null);
    let out = match backend {
        Backend::Exact => commands::dispatch::<Gaussian>(&cli.command, &doc, &ctx)?,
        Backend::Approx => commands::dispatch::<Approx>(&cli.command, &doc, &ctx)?,
    };
    match out {
        commands::Output::Json(v) => emit(&format!("{}\n", serde_json::to_string_pretty(&v)?))?,
        commands::Output::Text(t) => emit(&t)?,
    }
    Ok(ExitCode::SUCCESS)
}
