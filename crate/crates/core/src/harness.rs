//! Command front end: run protocol simulations into trace files, check
//! recorded traces, and print oracle prefixes.
//!
//! A trace file has one JSON record per line: a header with the format
//! version and the simulation settings, one record per round, and a footer
//! with the completion status and summary counts. The output path is not
//! part of the header, so re-running a header's settings reproduces the file
//! byte for byte.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abp::{
    check_trace, render_bits, simulate_abp, AbpTrace, Check, OracleSource, OracleStream, RoundRecord, TraceError,
};

pub const FORMAT_VERSION: u32 = 1;

pub type Payload = i64;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl HarnessError {
    /// 2 for usage and parse errors, 3 for I/O errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::InvalidConfig(_) | HarnessError::Parse { .. } => 2,
            HarnessError::Io { .. } => 3,
        }
    }
}

/// Everything that determines a simulation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimSettings {
    pub input: Vec<Payload>,
    pub seed_data: u64,
    pub seed_ack: u64,
    pub theta_data: f64,
    pub theta_ack: f64,
    pub initial_bit: bool,
    pub max_rounds: usize,
}

impl Default for SimSettings {
    fn default() -> Self {
        SimSettings {
            input: Vec::new(),
            seed_data: 0,
            seed_ack: 1,
            theta_data: 0.5,
            theta_ack: 0.5,
            initial_bit: false,
            max_rounds: 10_000,
        }
    }
}

impl SimSettings {
    pub fn validate(&self) -> Result<(), HarnessError> {
        for (name, theta) in [("theta_data", self.theta_data), ("theta_ack", self.theta_ack)] {
            if !(theta > 0.0 && theta <= 1.0) {
                return Err(HarnessError::InvalidConfig(format!(
                    "{name} must lie in (0, 1], got {theta}"
                )));
            }
        }
        if self.max_rounds == 0 {
            return Err(HarnessError::InvalidConfig("max_rounds must be at least 1".into()));
        }
        Ok(())
    }

    fn oracles(&self) -> Result<(OracleStream, OracleStream), HarnessError> {
        let invalid = |e: crate::abp::OracleError| HarnessError::InvalidConfig(e.to_string());
        Ok((
            OracleStream::seeded(self.seed_data, self.theta_data).map_err(invalid)?,
            OracleStream::seeded(self.seed_ack, self.theta_ack).map_err(invalid)?,
        ))
    }

    pub fn simulate(&self) -> Result<AbpTrace<Payload>, HarnessError> {
        self.validate()?;
        let (data, ack) = self.oracles()?;
        Ok(simulate_abp(
            &self.input,
            self.initial_bit,
            &data,
            &ack,
            self.max_rounds,
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub settings: SimSettings,
    pub output_path: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub completed: bool,
    pub rounds: usize,
    pub delivered: usize,
    pub data_drops: usize,
    pub ack_drops: usize,
}

impl Summary {
    fn of(trace: &AbpTrace<Payload>) -> Self {
        Summary {
            completed: trace.completed,
            rounds: trace.rounds_used(),
            delivered: trace.o().len(),
            data_drops: trace.data_drops(),
            ack_drops: trace.ack_drops(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum Record {
    Header { version: u32, config: SimSettings },
    Round(RoundRecord<Payload>),
    Footer(Summary),
}

/// The trace file content for a simulation, one record per line.
pub fn render_trace(settings: &SimSettings, trace: &AbpTrace<Payload>) -> String {
    let mut out = String::new();
    let mut line = |record: &Record| {
        out.push_str(&serde_json::to_string(record).expect("records serialize"));
        out.push('\n');
    };
    line(&Record::Header {
        version: FORMAT_VERSION,
        config: settings.clone(),
    });
    for round in &trace.rounds {
        line(&Record::Round(round.clone()));
    }
    line(&Record::Footer(Summary::of(trace)));
    out
}

/// A trace file read back: the settings from its header and the trace.
#[derive(Clone, Debug)]
pub struct LoadedTrace {
    pub settings: SimSettings,
    pub trace: AbpTrace<Payload>,
    pub summary: Summary,
}

pub fn parse_trace(path: &Path, text: &str) -> Result<LoadedTrace, HarnessError> {
    let error = |line: usize, message: String| HarnessError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut settings = None;
    let mut rounds = Vec::new();
    let mut summary = None;
    let mut last_line = 0;
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        last_line = line_no;
        if summary.is_some() {
            return Err(error(line_no, "record after footer".into()));
        }
        let record: Record = serde_json::from_str(line).map_err(|e| error(line_no, e.to_string()))?;
        match record {
            Record::Header { version, config } => {
                if settings.is_some() || line_no != 1 {
                    return Err(error(line_no, "header must be the first and only header record".into()));
                }
                if version != FORMAT_VERSION {
                    return Err(error(line_no, format!("unsupported format version {version}")));
                }
                settings = Some(config);
            }
            Record::Round(round) => {
                if settings.is_none() {
                    return Err(error(line_no, "round record before header".into()));
                }
                rounds.push(round);
            }
            Record::Footer(s) => {
                if settings.is_none() {
                    return Err(error(line_no, "footer before header".into()));
                }
                summary = Some(s);
            }
        }
    }
    let settings = settings.ok_or_else(|| error(1, "missing header".into()))?;
    let summary = summary.ok_or_else(|| error(last_line + 1, "missing footer, file is truncated".into()))?;
    if summary.rounds != rounds.len() {
        return Err(error(
            last_line,
            format!("footer counts {} rounds, file has {}", summary.rounds, rounds.len()),
        ));
    }
    let trace = AbpTrace {
        input: settings.input.clone(),
        initial_bit: settings.initial_bit,
        rounds,
        completed: summary.completed,
        data_oracle: OracleSource::Seeded {
            seed: settings.seed_data,
            theta: settings.theta_data,
        },
        ack_oracle: OracleSource::Seeded {
            seed: settings.seed_ack,
            theta: settings.theta_ack,
        },
    };
    Ok(LoadedTrace {
        settings,
        trace,
        summary,
    })
}

pub fn load_trace(path: &Path) -> Result<LoadedTrace, HarnessError> {
    let text = fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_trace(path, &text)
}

/// Simulates, writes the trace file and prints a one-line JSON summary.
pub fn cmd_simulate(config: &RunConfig, out: &mut dyn Write) -> Result<Summary, HarnessError> {
    let trace = config.settings.simulate()?;
    let text = render_trace(&config.settings, &trace);
    let io_error = |source| HarnessError::Io {
        path: config.output_path.clone(),
        source,
    };
    fs::write(&config.output_path, text).map_err(io_error)?;
    let summary = Summary::of(&trace);
    writeln!(out, "{}", serde_json::to_string(&summary).expect("summary serializes")).map_err(io_error)?;
    Ok(summary)
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub check: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl From<&Check> for Verdict {
    fn from(c: &Check) -> Self {
        Verdict {
            check: c.name.to_string(),
            passed: c.passed,
            detail: c.detail.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub passed: bool,
    pub verdicts: Vec<Verdict>,
}

impl CheckOutcome {
    /// 0 when every verdict passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Checks a trace that is already in memory.
pub fn check_loaded(trace: &AbpTrace<Payload>) -> CheckOutcome {
    let verdicts = match check_trace(trace) {
        Ok(report) => report.checks.iter().map(Verdict::from).collect(),
        Err(TraceError::Malformed { round, reason }) => vec![Verdict {
            check: "trace_well_formed".into(),
            passed: false,
            detail: format!("round {round}: {reason}"),
        }],
    };
    CheckOutcome {
        passed: verdicts.iter().all(|v| v.passed),
        verdicts,
    }
}

/// Runs every specification check on a trace file and prints the verdicts as JSON.
pub fn cmd_check(path: &Path, out: &mut dyn Write) -> Result<CheckOutcome, HarnessError> {
    let loaded = load_trace(path)?;
    let outcome = check_loaded(&loaded.trace);
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&outcome).expect("verdicts serialize")
    )
    .map_err(|source| HarnessError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })?;
    Ok(outcome)
}

/// Prints the first `count` bits of the seeded oracle as `T`/`F` characters.
pub fn cmd_gen_oracle(seed: u64, theta: f64, count: usize, out: &mut dyn Write) -> Result<String, HarnessError> {
    if count == 0 {
        return Err(HarnessError::InvalidConfig("count must be at least 1".into()));
    }
    let oracle = OracleStream::seeded(seed, theta).map_err(|e| HarnessError::InvalidConfig(e.to_string()))?;
    let bits = render_bits(&oracle.prefix(count));
    writeln!(out, "{bits}").map_err(|source| HarnessError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })?;
    Ok(bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(dir: &Path, input: Vec<Payload>, theta: f64) -> RunConfig {
        RunConfig {
            settings: SimSettings {
                input,
                theta_data: theta,
                theta_ack: theta,
                seed_data: 11,
                seed_ack: 12,
                ..SimSettings::default()
            },
            output_path: dir.join("trace.jsonl"),
        }
    }

    #[test]
    fn lossless_run_takes_one_round_per_datum() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = Vec::new();
        let summary = cmd_simulate(&config(dir.path(), vec![1, 2, 3], 1.0), &mut out).unwrap();
        assert_eq!(summary.delivered, 3);
        assert_eq!(summary.rounds, 3);
        assert_eq!((summary.data_drops, summary.ack_drops), (0, 0));
        assert!(String::from_utf8(out).unwrap().contains("\"delivered\":3"));
    }

    #[test]
    fn empty_input_gives_valid_trace() {
        let dir = tempfile::tempdir().unwrap();
        let c = config(dir.path(), vec![], 0.5);
        let summary = cmd_simulate(&c, &mut io::sink()).unwrap();
        assert_eq!((summary.delivered, summary.rounds), (0, 0));
        let outcome = cmd_check(&c.output_path, &mut io::sink()).unwrap();
        assert_eq!(outcome.exit_code(), 0);
    }

    #[test]
    fn zero_density_is_invalid() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = config(dir.path(), vec![1], 0.5);
        c.settings.theta_data = 0.0;
        let err = cmd_simulate(&c, &mut io::sink()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        c.settings.theta_data = 0.5;
        c.settings.max_rounds = 0;
        assert_eq!(cmd_simulate(&c, &mut io::sink()).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn unwritable_output_is_an_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = config(dir.path(), vec![1], 0.5);
        c.output_path = dir.path().join("missing").join("trace.jsonl");
        assert_eq!(cmd_simulate(&c, &mut io::sink()).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn fresh_trace_passes_every_check() {
        let dir = tempfile::tempdir().unwrap();
        let c = config(dir.path(), vec![3, 1, 2, 0, 1], 0.4);
        cmd_simulate(&c, &mut io::sink()).unwrap();
        let mut out = Vec::new();
        let outcome = cmd_check(&c.output_path, &mut out).unwrap();
        assert_eq!(outcome.exit_code(), 0);
        assert_eq!(outcome.verdicts.len(), 10);
        let json: serde_json::Value = serde_json::from_slice(&out).unwrap();
        assert_eq!(json["passed"], true);
    }

    #[test]
    fn replaying_the_header_reproduces_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let c = config(dir.path(), vec![2, 2, 3], 0.3);
        cmd_simulate(&c, &mut io::sink()).unwrap();
        let original = fs::read_to_string(&c.output_path).unwrap();
        let loaded = load_trace(&c.output_path).unwrap();
        let replayed = render_trace(&loaded.settings, &loaded.settings.simulate().unwrap());
        assert_eq!(original, replayed);
        // line endings do not matter when reading back
        let crlf = original.replace('\n', "\r\n");
        assert_eq!(parse_trace(Path::new("x"), &crlf).unwrap().trace, loaded.trace);
    }

    #[test]
    fn corrupted_output_names_overall_check() {
        let dir = tempfile::tempdir().unwrap();
        let c = config(dir.path(), vec![1, 2], 1.0);
        cmd_simulate(&c, &mut io::sink()).unwrap();
        let text = fs::read_to_string(&c.output_path).unwrap();
        let corrupted = text.replacen("\"o\":1", "\"o\":3", 1);
        assert_ne!(text, corrupted);
        fs::write(&c.output_path, corrupted).unwrap();
        let outcome = cmd_check(&c.output_path, &mut io::sink()).unwrap();
        assert_eq!(outcome.exit_code(), 1);
        assert!(outcome.verdicts.iter().any(|v| v.check == "overall" && !v.passed));
    }

    #[test]
    fn truncated_file_is_a_parse_error_with_line() {
        let dir = tempfile::tempdir().unwrap();
        let c = config(dir.path(), vec![1, 2, 3], 0.5);
        cmd_simulate(&c, &mut io::sink()).unwrap();
        let text = fs::read_to_string(&c.output_path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        let cut = lines[..lines.len() - 1].join("\n");
        fs::write(&c.output_path, &cut).unwrap();
        match cmd_check(&c.output_path, &mut io::sink()).unwrap_err() {
            HarnessError::Parse { line, .. } => assert_eq!(line, lines.len()),
            other => panic!("unexpected {other}"),
        }

        let half = &lines[1][..lines[1].len() / 2];
        fs::write(&c.output_path, format!("{}\n{half}\n", lines[0])).unwrap();
        let err = cmd_check(&c.output_path, &mut io::sink()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(matches!(err, HarnessError::Parse { line: 2, .. }));
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let err = cmd_check(Path::new("/nonexistent/trace.jsonl"), &mut io::sink()).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn gen_oracle_examples() {
        assert_eq!(cmd_gen_oracle(7, 1.0, 5, &mut io::sink()).unwrap(), "TTTTT");
        let a = cmd_gen_oracle(7, 0.5, 1000, &mut io::sink()).unwrap();
        let b = cmd_gen_oracle(7, 0.5, 1000, &mut io::sink()).unwrap();
        assert_eq!(a, b);
        let trues = a.chars().filter(|&c| c == 'T').count();
        assert!((400..=600).contains(&trues), "{trues}");
        assert_eq!(cmd_gen_oracle(7, 0.0, 5, &mut io::sink()).unwrap_err().exit_code(), 2);
        assert_eq!(cmd_gen_oracle(7, 0.5, 0, &mut io::sink()).unwrap_err().exit_code(), 2);
    }
}
