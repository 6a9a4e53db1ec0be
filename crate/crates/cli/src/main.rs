mod commands;
mod output;

use std::io;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use uldl_dof::Rational;

use output::Format;

/// Sum-DoF calculator and scheme simulator for uplink-downlink two-cell MIMO
/// networks.
#[derive(Debug, Parser)]
#[command(name = "uldl", version)]
pub struct Cli {
    /// CSV with a header row.
    #[arg(long, global = true, conflicts_with = "json")]
    csv: bool,
    /// JSON lines (default).
    #[arg(long, global = true)]
    json: bool,
    /// First seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ConfigArgs {
    #[arg(value_parser = clap::value_parser!(u32).range(1..))]
    pub m1: u32,
    #[arg(value_parser = clap::value_parser!(u32).range(1..))]
    pub m2: u32,
    #[arg(value_parser = clap::value_parser!(u32).range(1..))]
    pub n1: u32,
    #[arg(value_parser = clap::value_parser!(u32).range(1..))]
    pub n2: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveMode {
    /// `(M, N, N, M)`.
    Cross,
    /// `(M, M, N, N)`.
    Symmetric,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sum DoF, bounds, regime rows and both LP optima for one config.
    Dof(ConfigArgs),
    /// Fraction of `[1, Λ]^4` where uplink-downlink beats conventional operation.
    Gain {
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        lambda_cap: u32,
        /// Also list the first N strict-gain configs.
        #[arg(long)]
        witness: Option<usize>,
    },
    /// Sum DoF and bounds along a sweep of M with N fixed.
    Curve {
        #[arg(long, value_enum, default_value_t = CurveMode::Cross)]
        mode: CurveMode,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        from: u32,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
        to: u32,
    },
    /// Checks every regime row against the LPs on `[1, Λ]^4`.
    Table2 {
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        lambda_cap: u32,
    },
    /// Builds beams on random channels and checks decodability.
    Simulate {
        #[arg(value_parser = clap::value_parser!(u32).range(1..), num_args = 4, value_names = ["M1", "M2", "N1", "N2"])]
        config: Vec<u32>,
        /// Symbol extension parameter.
        #[arg(long, default_value_t = 1)]
        t: u32,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        scheme: u8,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        seeds: u64,
        /// Override the LP-optimal allocation (requires --lambda2).
        #[arg(long, requires = "lambda2")]
        lambda1: Option<Rational>,
        #[arg(long, requires = "lambda1")]
        lambda2: Option<Rational>,
        /// Exact scheme for `(1, 2, N1, 1)` over N1 slots.
        #[arg(long, requires = "n1", conflicts_with_all = ["config", "t", "scheme", "lambda1"])]
        simple: bool,
        #[arg(long = "n1", value_parser = clap::value_parser!(u32).range(1..))]
        n1: Option<u32>,
    },
    /// Four-slot delayed-CSIT scheme on `(1, 2, 2, 1)`.
    Delayed {
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        seeds: u64,
    },
    /// Hotspot bounds with L micro cells.
    Hotspot {
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        l: u32,
        #[command(flatten)]
        config: ConfigArgs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = if cli.csv { Format::Csv } else { Format::JsonLines };
    match commands::run(&cli.command, cli.seed) {
        Ok(outcome) => {
            if let Err(e) = output::emit(io::stdout().lock(), format, &outcome.records) {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            }
            if let Some(msg) = &outcome.failure {
                eprintln!("error: {msg}");
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
