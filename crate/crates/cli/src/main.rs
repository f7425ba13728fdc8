//! `tfa`: command-line front end for `tfa-core`.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage or
//! input errors. Reports go to standard output as JSON.

mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "tfa", version, about = "Time-frequency analysis on cyclic groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Relative support threshold.
    #[arg(long, default_value_t = tfa_core::DEFAULT_TAU)]
    pub tau: f64,
}

#[derive(Args, Debug, Clone)]
pub struct Ensemble {
    /// Number of seeded trials.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Ensemble seed; the TFA_SEED environment variable takes precedence.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute V_g f, write it as CSV and report its support.
    Stft {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        f: std::path::PathBuf,
        #[arg(long)]
        g: std::path::PathBuf,
        /// CSV destination for the full table.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Build an extremal pair on H_{b,p} and verify its support.
    Extremal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: usize,
        #[arg(long, default_value_t = 0)]
        p: usize,
        /// Window shift as "j,k".
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Support offset as "j,k".
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        /// Window factor as "re,im".
        #[arg(long, allow_hyphen_values = true)]
        c1: Option<String>,
        /// Signal factor as "re,im".
        #[arg(long, allow_hyphen_values = true)]
        c2: Option<String>,
        /// Directory receiving f.json, g.json and spec.json.
        #[arg(long)]
        out_dir: Option<std::path::PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Recover (b, p, mu) and a canonical model from an extremal pair.
    Classify {
        #[arg(long)]
        f: std::path::PathBuf,
        #[arg(long)]
        g: std::path::PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Seeded trials of the weak STFT support bound.
    Verify {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        ensemble: Ensemble,
        #[command(flatten)]
        common: Common,
    },
    /// Donoho-Stark bound on seeded trials and on subgroup indicators.
    Ds {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        ensemble: Ensemble,
        #[command(flatten)]
        common: Common,
    },
    /// Tao's bound for a prime modulus.
    Tao {
        #[arg(long)]
        prime: usize,
        #[command(flatten)]
        ensemble: Ensemble,
        #[command(flatten)]
        common: Common,
    },
    /// List the order-N subgroups H_{b,p} of Z_N x Z_N.
    Subgroups {
        #[arg(long)]
        n: usize,
        /// Omit the point lists.
        #[arg(long)]
        summary: bool,
    },
    /// Exhaustive scan over all pairs with entries in a small alphabet.
    Scan {
        #[arg(long)]
        n: usize,
        /// Comma-separated entries from {0, 1, -1, i, -i}.
        #[arg(long, default_value = "0,1,-1", allow_hyphen_values = true)]
        alphabet: String,
        /// Only pairs of equal norm supported on subgroup cosets.
        #[arg(long)]
        restricted: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Weak bound and coset structure on a finite Abelian group.
    AbelianVerify {
        /// Factors such as "2x4".
        #[arg(long)]
        group: String,
        #[command(flatten)]
        ensemble: Ensemble,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match commands::run(cli.command) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            // A closed pipe on the reader side is not an error for us.
            let _ = writeln!(out, "{}", outcome.payload);
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
