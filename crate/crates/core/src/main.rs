use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};
use streamproc::harness::{cmd_check, cmd_gen_oracle, cmd_simulate, HarnessError, Payload, RunConfig, SimSettings};

#[derive(Parser)]
#[command(version, about = "Alternating Bit Protocol simulator and trace checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write its trace file
    Simulate {
        /// Comma-separated input payloads
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        input: Vec<Payload>,
        #[arg(long, default_value_t = 0)]
        seed_data: u64,
        #[arg(long, default_value_t = 1)]
        seed_ack: u64,
        #[arg(long, default_value_t = 0.5)]
        theta_data: f64,
        #[arg(long, default_value_t = 0.5)]
        theta_ack: f64,
        #[arg(long, action = ArgAction::Set, default_value_t = false)]
        initial_bit: bool,
        #[arg(long, default_value_t = 10_000)]
        max_rounds: usize,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Check a trace file against the protocol specifications
    Check { trace: PathBuf },
    /// Print a prefix of a seeded oracle
    GenOracle {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        count: usize,
    },
}

fn run(cli: Cli) -> Result<i32, HarnessError> {
    let mut stdout = io::stdout().lock();
    match cli.command {
        Command::Simulate {
            input,
            seed_data,
            seed_ack,
            theta_data,
            theta_ack,
            initial_bit,
            max_rounds,
            output,
        } => {
            let config = RunConfig {
                settings: SimSettings {
                    input,
                    seed_data,
                    seed_ack,
                    theta_data,
                    theta_ack,
                    initial_bit,
                    max_rounds,
                },
                output_path: output,
            };
            cmd_simulate(&config, &mut stdout)?;
            Ok(0)
        }
        Command::Check { trace } => Ok(cmd_check(&trace, &mut stdout)?.exit_code()),
        Command::GenOracle { seed, theta, count } => {
            cmd_gen_oracle(seed, theta, count, &mut stdout)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
