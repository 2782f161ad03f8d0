//! Command-line front end. [`run`] is the whole program minus process
//! plumbing, so tests can drive it in-process.

use std::io::Write;
use std::path::{Path, PathBuf};

use akforge::family::{certify_member, MilnorCheck};
use akforge::milnor::{default_m_cap, prime_seed_from_env};
use akforge::poly::PolyJson;
use akforge::{
    milnor_number, parse_poly, ratio_table, split_and_classify, upper_bound, AkResult, Arithmetic, Error,
    SparsePoly,
};
use clap::{ArgGroup, Parser, Subcommand};

/// Exit code for a successful or certified run.
pub const EXIT_OK: i32 = 0;
/// Well-formed input that could not be certified.
pub const EXIT_NOT_CERTIFIED: i32 = 1;
/// Usage, parse or I/O error.
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "akforge", version, about = "Certify A_k singularities of plane curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build family member `s` and emit its certificate as JSON.
    Construct {
        #[arg(long)]
        s: i64,
        /// Also compute the Milnor number of the germ at the origin.
        #[arg(long)]
        milnor: bool,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify the germ at the origin via the splitting lemma.
    Certify {
        /// Inline polynomial, or `@path` to a polynomial JSON file.
        #[arg(long)]
        poly: String,
        #[arg(long = "max-k", default_value_t = 4096)]
        max_k: u64,
    },
    /// Milnor number of the germ at the origin.
    Milnor {
        #[arg(long)]
        poly: String,
        /// Use two-prime modular ranks (primes fixed by AKFORGE_PRIME_SEED).
        #[arg(long)]
        modular: bool,
    },
    /// Upper bound on `k` for a degree-`d` curve.
    #[command(group(ArgGroup::new("mode").required(true).args(["d", "table"])))]
    Bound {
        #[arg(long)]
        d: Option<u64>,
        #[arg(long, requires = "max_d")]
        table: bool,
        #[arg(long = "max-d")]
        max_d: Option<u64>,
    },
    /// Ratios `k/d^2` for the family, as JSON or CSV.
    FamilyTable {
        #[arg(long = "max-s")]
        max_s: u64,
        #[arg(long)]
        csv: bool,
    },
}

/// Outcome of a command that did not hit a usage error.
enum Outcome {
    Done,
    NotCertified(String),
}

#[derive(Debug)]
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

impl From<std::io::Error> for Usage {
    fn from(e: std::io::Error) -> Self {
        Usage(format!("I/O error: {e}"))
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(Outcome::Done) => EXIT_OK,
        Ok(Outcome::NotCertified(msg)) => {
            let _ = writeln!(err, "{msg}");
            EXIT_NOT_CERTIFIED
        }
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<Outcome, Usage> {
    match command {
        Command::Construct { s, milnor, out: path } => construct(s, milnor, path.as_deref(), out),
        Command::Certify { poly, max_k } => {
            let f = load_poly(&poly)?;
            match split_and_classify(&f, max_k) {
                Ok(AkResult::Ak(k)) => {
                    writeln!(out, "A_{k}")?;
                    Ok(Outcome::Done)
                }
                Ok(other) => {
                    writeln!(out, "{other}")?;
                    Ok(Outcome::NotCertified(format!("not certified: {other}")))
                }
                Err(e @ Error::NotACriticalGerm(_)) => Ok(Outcome::NotCertified(e.to_string())),
                Err(e) => Err(e.into()),
            }
        }
        Command::Milnor { poly, modular } => {
            let f = load_poly(&poly)?;
            let arith = if modular { Arithmetic::TwoPrime { seed: prime_seed_from_env()? } } else { Arithmetic::Exact };
            match milnor_number(&f, default_m_cap(None), arith) {
                Ok(report) => {
                    writeln!(out, "{}", report.to_json())?;
                    Ok(Outcome::Done)
                }
                Err(e @ (Error::NonIsolatedSuspected { .. } | Error::NonIsolated)) => {
                    Ok(Outcome::NotCertified(e.to_string()))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Bound { d: Some(d), .. } => {
            writeln!(out, "{}", upper_bound(d)?)?;
            Ok(Outcome::Done)
        }
        Command::Bound { max_d, .. } => {
            let max_d = max_d.expect("clap enforces --max-d with --table");
            writeln!(out, "d,upper")?;
            for d in 1..=max_d {
                writeln!(out, "{d},{}", upper_bound(d)?)?;
            }
            Ok(Outcome::Done)
        }
        Command::FamilyTable { max_s, csv } => {
            let rows = ratio_table(max_s)?;
            if csv {
                write!(out, "{}", akforge::bounds::ratio_table_csv(&rows))?;
            } else {
                let json: Vec<_> = rows.iter().map(|r| r.to_json()).collect();
                writeln!(out, "{}", serde_json::Value::Array(json))?;
            }
            Ok(Outcome::Done)
        }
    }
}

fn construct(s: i64, milnor: bool, path: Option<&Path>, out: &mut dyn Write) -> Result<Outcome, Usage> {
    let check = if milnor { MilnorCheck::Run { prime_seed: prime_seed_from_env()? } } else { MilnorCheck::Skip };
    let cert = match certify_member(s, check) {
        Ok(cert) => cert,
        Err(e @ Error::CertificationFailed { .. }) => return Ok(Outcome::NotCertified(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let text = format!("{}\n", cert.to_json());
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Usage(format!("cannot write {}: {e}", p.display())))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(Outcome::Done)
}

/// Parses `SRC`: an inline expression or `@path` to polynomial JSON.
fn load_poly(src: &str) -> Result<SparsePoly, Usage> {
    match src.strip_prefix('@') {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {path}: {e}")))?;
            let json: PolyJson =
                serde_json::from_str(&text).map_err(|e| Usage(format!("invalid polynomial JSON in {path}: {e}")))?;
            Ok(SparsePoly::from_json(&json)?)
        }
        None => Ok(parse_poly(src)?),
    }
}
