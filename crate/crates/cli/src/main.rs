use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use purity_witness::cert::{self, SimProtocol, Subject, VerifyOptions};
use purity_witness::{witness, Error};

const EXIT_VALIDATION: u8 = 2;
const EXIT_QUBIT: u8 = 3;
const EXIT_GAP: u8 = 4;

#[derive(Parser)]
#[command(name = "purity-witness", version, about = "Purity and concurrence certificates from sequential measurement counts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify purity and concurrence bounds from a counts file.
    Certify {
        counts: PathBuf,
        /// Failure probability of the confidence statement.
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        /// Also write the certificate to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sample counts from a canonical protocol.
    Simulate {
        #[arg(value_enum)]
        protocol: Protocol,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        w: f64,
        #[arg(long, default_value_t = 4)]
        d: usize,
        #[arg(long, default_value_t = 10_000)]
        shots: u64,
        #[arg(long, env = "PURITY_WITNESS_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Export the constrained maximum of B1 over a (p, w) grid as CSV.
    Surface {
        #[arg(long, default_value_t = 101)]
        p_steps: usize,
        #[arg(long, default_value_t = 101)]
        w_steps: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Compare numerical maxima against the closed forms.
    Verify {
        #[arg(value_enum)]
        subject: VerifySubject,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        w: f64,
        #[arg(long, default_value_t = 4)]
        d: usize,
        #[arg(long, default_value_t = 100)]
        restarts: usize,
        #[arg(long, env = "PURITY_WITNESS_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate the closed-form bounds directly.
    Bounds {
        /// Observed value of B1.
        #[arg(long)]
        b1: Option<f64>,
        /// Initial purity, together with --b1, for the post-measurement bound.
        #[arg(long, requires = "b1")]
        purity: Option<f64>,
        /// Initial Bloch length, together with --w.
        #[arg(long, requires = "w", conflicts_with = "b1")]
        p: Option<f64>,
        /// Bloch length of the post-measurement states.
        #[arg(long, requires = "p")]
        w: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Protocol {
    Theorem2,
    Qutrit4,
    Quditmm,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifySubject {
    Eq5,
    Theorem2,
    Qudit,
    Monotonicity,
}

enum Failure {
    Lib(Error),
    Gap,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Gap) => {
            eprintln!("error: verification gap exceeds tolerance");
            ExitCode::from(EXIT_GAP)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::QubitAssumption(_) => ExitCode::from(EXIT_QUBIT),
                _ => ExitCode::from(EXIT_VALIDATION),
            }
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Certify { counts, delta, output } => {
            let rec = cert::ingest_counts(&counts)?;
            let c = cert::certify(&rec, delta)?;
            let text = c.to_json();
            if let Some(path) = output {
                std::fs::write(path, &text).map_err(Error::from)?;
            }
            print!("{text}");
        }
        Command::Simulate { protocol, p, w, d, shots, seed, output } => {
            let protocol = match protocol {
                Protocol::Theorem2 => SimProtocol::Theorem2 { p, w },
                Protocol::Qutrit4 => SimProtocol::Qutrit4,
                Protocol::Quditmm => SimProtocol::QuditMaxMixed { d },
            };
            let rec = cert::simulate(protocol, shots, seed)?;
            cert::write_counts(&rec, &output)?;
        }
        Command::Surface { p_steps, w_steps, output } => {
            cert::export_surface(p_steps, w_steps, &output)?;
        }
        Command::Verify { subject, p, w, d, restarts, seed } => {
            let subject = match subject {
                VerifySubject::Eq5 => Subject::Eq5,
                VerifySubject::Theorem2 => Subject::Theorem2,
                VerifySubject::Qudit => Subject::Qudit,
                VerifySubject::Monotonicity => Subject::Monotonicity,
            };
            let out = cert::verify(subject, &VerifyOptions { p, w, d, restarts, seed })?;
            for l in &out.lines {
                println!("{}", serde_json::to_string(l).expect("serializable"));
            }
            if !out.passed {
                return Err(Failure::Gap);
            }
        }
        Command::Bounds { b1, purity, p, w } => {
            let value = match (b1, purity, p, w) {
                (Some(b), Some(purity), _, _) => json!({
                    "b1": b,
                    "initial_purity": purity,
                    "postmeas_bound": witness::postmeasurement_purity_bound(b, purity)?,
                }),
                (Some(b), None, _, _) => json!({
                    "b1": b,
                    "purity_bound": witness::purity_lower_bound(b)?,
                    "concurrence_bound": witness::concurrence_upper_from_b1(b)?,
                }),
                (None, _, Some(p), Some(w)) => json!({
                    "p": p,
                    "w": w,
                    "b1_max_initial": witness::b1_max_initial(p)?,
                    "b1_max_constrained": witness::b1_max_constrained(p, w)?,
                    "branch_threshold": witness::branch_threshold(p),
                }),
                _ => return Err(Error::InvalidInput("bounds needs --b1, --b1 with --purity, or --p with --w".into()).into()),
            };
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
        }
    }
    Ok(())
}
