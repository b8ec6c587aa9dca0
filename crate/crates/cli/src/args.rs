use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::{Job, JobConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Dormant opers in positive characteristic: classification and verification.
#[derive(Debug, Parser)]
#[command(name = "operlab", version)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the certificate here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Monomial window `[-K, K]` for D-module checks.
    #[arg(long, global = true)]
    pub window: Option<i64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hasse invariant with its cross-checks.
    Curve {
        #[command(subcommand)]
        cmd: CurveCmd,
    },
    /// Dormant PGL_n-opers on a genus-1 curve.
    Oper {
        #[command(subcommand)]
        cmd: OperCmd,
    },
    /// Dormant opers over truncated Witt rings.
    Witt {
        #[command(subcommand)]
        cmd: WittCmd,
    },
    /// Level structures on the multiplicative local model.
    Dop {
        #[command(subcommand)]
        cmd: DopCmd,
    },
    /// Regular Weyl-orbit counts over a range of primes.
    Census(CensusArgs),
}

#[derive(Debug, Subcommand)]
pub enum CurveCmd {
    Hasse {
        #[arg(long)]
        curve: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum OperCmd {
    Classify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        curve: String,
    },
    /// Hitchin-Mochizuki map at a point of the adjoint quotient over F_p.
    Hm {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        /// Comma-separated coordinates, length n - 1.
        #[arg(long, allow_hyphen_values = true)]
        rho: String,
    },
    MiuraFiber {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        rho: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct WittParams {
    #[arg(long)]
    pub p: u64,
    #[arg(long = "N")]
    pub length: u32,
}

#[derive(Debug, Subcommand)]
pub enum WittCmd {
    Classify {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        params: WittParams,
        #[arg(long)]
        miura: bool,
    },
    Decompose {
        /// Rows separated by `;`, entries by `,`.
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[command(flatten)]
        params: WittParams,
    },
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        #[command(flatten)]
        params: WittParams,
    },
    Lift {
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        #[command(flatten)]
        params: WittParams,
    },
}

#[derive(Debug, Subcommand)]
pub enum DopCmd {
    Verify429 {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long)]
        p: u64,
        #[arg(long = "N")]
        length: u32,
        /// Emit the full scalar table.
        #[arg(long)]
        table: bool,
    },
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    #[arg(long = "type")]
    pub family: String,
    #[arg(long)]
    pub n: usize,
    /// Inclusive range `a..b` or a single prime.
    #[arg(long)]
    pub p: String,
}

impl Cli {
    pub fn job_config(&self) -> JobConfig {
        let job = match &self.command {
            Command::Curve { cmd: CurveCmd::Hasse { curve } } => Job::CurveHasse { curve: curve.clone() },
            Command::Oper { cmd } => match cmd {
                OperCmd::Classify { n, curve } => Job::OperClassify { n: *n, curve: curve.clone() },
                OperCmd::Hm { p, a, rho } => Job::OperHm { p: *p, a: *a, rho: rho.clone() },
                OperCmd::MiuraFiber { n, curve, rho } => {
                    Job::OperMiuraFiber { n: *n, curve: curve.clone(), rho: rho.clone() }
                }
            },
            Command::Witt { cmd } => match cmd {
                WittCmd::Classify { n, params, miura } => {
                    Job::WittClassify { n: *n, p: params.p, length: params.length, miura: *miura }
                }
                WittCmd::Decompose { matrix, params } => {
                    Job::WittDecompose { matrix: matrix.clone(), p: params.p, length: params.length }
                }
                WittCmd::Reduce { class, params } => {
                    Job::WittReduce { class: class.clone(), p: params.p, length: params.length }
                }
                WittCmd::Lift { class, params } => {
                    Job::WittLift { class: class.clone(), p: params.p, length: params.length }
                }
            },
            Command::Dop { cmd: DopCmd::Verify429 { a, p, length, table } } => {
                Job::DopVerify429 { a: *a, p: *p, length: *length, table: *table }
            }
            Command::Census(c) => Job::Census { family: c.family.clone(), n: c.n, primes: c.p.clone() },
        };
        JobConfig { job, window: self.window }
    }
}
