use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use proxcert_cli::commands::EXIT_CERT_FAILURE;
use proxcert_cli::{cmd_pl_compare, cmd_run, cmd_tightness, CliError, RunOptions};

#[derive(Debug, Parser)]
#[command(
    name = "proxcert",
    version,
    about = "Run and certify proximal gradient experiments"
)]
struct Cli {
    /// Only print errors and requested tables
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every experiment in a config and write traces and reports
    Run {
        config: PathBuf,
        #[arg(long, env = "PROXCERT_OUT_DIR", default_value = "proxcert-out")]
        out_dir: PathBuf,
        /// Replace the seed of every random start point
        #[arg(long)]
        seed_override: Option<u64>,
    },
    /// Compare rho(t) with the contraction measured on the worst-case instance
    Tightness {
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long = "L", allow_negative_numbers = true)]
        lip: f64,
        /// Comma-separated steps: numbers, p/q, k/L or 2/(L+mu)
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0.05,0.1,2/(L+mu),1/L,2/L"
        )]
        t_grid: Vec<String>,
    },
    /// Print the optimality gap of one experiment against both PL envelopes
    PlCompare {
        config: PathBuf,
        id: String,
        /// Number of iterations; defaults to the experiment's max_iters
        #[arg(long)]
        iters: Option<usize>,
        #[arg(long)]
        seed_override: Option<u64>,
    },
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Run {
            config,
            out_dir,
            seed_override,
        } => {
            let outcome = cmd_run(
                &config,
                &RunOptions {
                    out_dir,
                    seed_override,
                },
            )?;
            if !cli.quiet {
                print!("{}", outcome.summary());
            }
            Ok(outcome.exit_code())
        }
        Command::Tightness { mu, lip, t_grid } => {
            let table = cmd_tightness(mu, lip, &t_grid)?;
            print!("{}", table.to_csv());
            if !cli.quiet {
                eprintln!("max abs diff = {:e}", table.max_abs_diff());
            }
            Ok(if table.passed() { 0 } else { EXIT_CERT_FAILURE })
        }
        Command::PlCompare {
            config,
            id,
            iters,
            seed_override,
        } => {
            let cmp = cmd_pl_compare(&config, &id, iters, seed_override)?;
            print!("{}", cmp.to_csv());
            if !cli.quiet {
                eprintln!(
                    "eta = {:e}, t = {:e}: new rate {:.6} vs baseline {:.6}",
                    cmp.eta, cmp.t, cmp.new_rate, cmp.baseline_rate
                );
            }
            Ok(if cmp.passed() { 0 } else { EXIT_CERT_FAILURE })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let level = if cli.quiet {
        log::LevelFilter::Error
    } else {
        log::LevelFilter::Warn
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .init();

    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
