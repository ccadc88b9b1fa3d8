//! Command-line front end: certify rank and dimension facts about the
//! Jacobian rings of a curve on the quadric surface.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bijac::config::{resolve, RawOptions};
use bijac::{cli, Error};

#[derive(Parser)]
#[command(
    name = "bijac",
    version,
    about = "Exact rank certificates for Jacobian rings of curves on P1 x P1"
)]
struct TopLevel {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Table of (dim S, dim J, dim R) over a rectangle of bidegrees
    Dims(CommonArgs),
    /// Certify smoothness by graded pieces of the Jacobian ideal
    Smooth(CommonArgs),
    /// Cross-check the operator-section construction of the ideal
    /// against the partial-derivative generators, twist by twist
    Oracle(CommonArgs),
    /// Dimension of the top ring piece
    Top(CommonArgs),
    /// Ranks of the duality pairings out of the doubled pieces
    Duality(CommonArgs),
    /// Stabilized length of the ramification base scheme
    Ramification(CommonArgs),
    /// Kernel probes for the two-section multiplication map
    Mu(CommonArgs),
    /// Certify maximal infinitesimal variation by seeded rank witnesses
    Ivhs(CommonArgs),
    /// Dimension-bound arithmetic for the contradiction argument
    Bounds(CommonArgs),
    /// Run every check in order, gated on the smoothness certificate
    #[command(name = "verify-all")]
    VerifyAll(CommonArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Dims(_) => "dims",
            Command::Smooth(_) => "smooth",
            Command::Oracle(_) => "oracle",
            Command::Top(_) => "top",
            Command::Duality(_) => "duality",
            Command::Ramification(_) => "ramification",
            Command::Mu(_) => "mu",
            Command::Ivhs(_) => "ivhs",
            Command::Bounds(_) => "bounds",
            Command::VerifyAll(_) => "verify-all",
        }
    }

    fn args(self) -> CommonArgs {
        match self {
            Command::Dims(a)
            | Command::Smooth(a)
            | Command::Oracle(a)
            | Command::Top(a)
            | Command::Duality(a)
            | Command::Ramification(a)
            | Command::Mu(a)
            | Command::Ivhs(a)
            | Command::Bounds(a)
            | Command::VerifyAll(a) => a,
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// First bidegree component of the curve
    #[arg(long)]
    d: Option<i64>,
    /// Second bidegree component of the curve
    #[arg(long)]
    e: Option<i64>,
    /// Curve polynomial: a file path or a literal in the grammar
    #[arg(long)]
    curve: Option<String>,
    /// Derive the curve from this seed instead
    #[arg(long)]
    curve_seed: Option<u64>,
    /// Scalar backend: p (prime field), Q (rationals), or hybrid
    #[arg(long)]
    field: Option<String>,
    /// Modulus for the prime-field backend (odd prime below 2^31)
    #[arg(long)]
    prime: Option<u64>,
    /// Number of sampling trials / probes
    #[arg(long)]
    trials: Option<u32>,
    /// Master seed for sampling; per-trial seeds are seed XOR trial
    #[arg(long)]
    seed: Option<u64>,
    /// Coefficient height for sampled polynomials
    #[arg(long)]
    height: Option<i64>,
    /// Escalation / sweep cap, first component
    #[arg(long)]
    cap_a: Option<i64>,
    /// Escalation / sweep cap, second component
    #[arg(long)]
    cap_b: Option<i64>,
    /// Lower bound of the dims rectangle, first component
    #[arg(long)]
    min_a: Option<i64>,
    /// Lower bound of the dims rectangle, second component
    #[arg(long)]
    min_b: Option<i64>,
    /// Write the JSON report to this path
    #[arg(long)]
    json: Option<PathBuf>,
    /// Config file with key=value lines mirroring the flags
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print more detail
    #[arg(short, long)]
    verbose: bool,
}

impl CommonArgs {
    fn raw(&self) -> RawOptions {
        RawOptions {
            d: self.d,
            e: self.e,
            curve: self.curve.clone(),
            curve_seed: self.curve_seed,
            field: self.field.clone(),
            prime: self.prime,
            trials: self.trials,
            seed: self.seed,
            height: self.height,
            cap_a: self.cap_a,
            cap_b: self.cap_b,
            min_a: self.min_a,
            min_b: self.min_b,
            json: self.json.clone(),
            verbose: self.verbose,
        }
    }
}

fn main() -> ExitCode {
    let top = TopLevel::parse();
    let name = top.command.name();
    let args = top.command.args();
    match execute(name, &args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("bijac: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(name: &str, args: &CommonArgs) -> Result<u8, Error> {
    let env: BTreeMap<String, String> = std::env::vars().collect();
    let cfg = resolve(name, args.raw(), &env, args.config.as_deref())?;
    let report = cli::run(&cfg)?;
    print!("{}", report.render_table());
    if let Some(path) = &cfg.json {
        std::fs::write(path, report.to_json())?;
    }
    Ok(report.exit_code() as u8)
}
