//! Writing a simulation trace file, checking it, and catching a corruption.

use std::fs;
use std::io;

use streamproc::harness::{cmd_check, cmd_simulate, RunConfig, SimSettings};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::temp_dir().join(format!("abp-trace-{}.jsonl", std::process::id()));
    let config = RunConfig {
        settings: SimSettings {
            input: vec![3, 1, 4, 1, 5],
            seed_data: 17,
            seed_ack: 18,
            theta_data: 0.5,
            theta_ack: 0.8,
            initial_bit: true,
            max_rounds: 1000,
        },
        output_path: path.clone(),
    };
    print!("summary: ");
    cmd_simulate(&config, &mut io::stdout())?;
    let text = fs::read_to_string(&path)?;
    println!("first lines:");
    for line in text.lines().take(3) {
        println!("  {line}");
    }

    let outcome = cmd_check(&path, &mut io::sink())?;
    println!(
        "check: exit {} with {} verdicts",
        outcome.exit_code(),
        outcome.verdicts.len()
    );

    // deliver a datum that was never sent
    fs::write(&path, text.replacen("\"o\":3", "\"o\":9", 1))?;
    let outcome = cmd_check(&path, &mut io::sink())?;
    println!("after corruption: exit {}", outcome.exit_code());
    for v in outcome.verdicts.iter().filter(|v| !v.passed) {
        println!("  failed {}: {}", v.check, v.detail);
    }
    fs::remove_file(&path)?;
    Ok(())
}
