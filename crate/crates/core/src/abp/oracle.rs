use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stream::Stream;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("oracle density must lie in (0, 1], got {0}")]
    InvalidDensity(f64),
    #[error("the repeating part of an oracle must not be empty")]
    EmptyCycle,
}

/// How an oracle stream was produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleSource {
    /// `prefix` followed by `cycle` repeated forever.
    Cyclic { prefix: Vec<bool>, cycle: Vec<bool> },
    /// Independent bits, each `true` with probability `theta`.
    Seeded { seed: u64, theta: f64 },
}

/// An infinite Boolean stream resolving a component's nondeterminism.
#[derive(Clone, Debug)]
pub struct OracleStream {
    bits: Stream<bool>,
    source: OracleSource,
}

fn check_density(theta: f64) -> Result<(), OracleError> {
    if theta > 0.0 && theta <= 1.0 {
        Ok(())
    } else {
        Err(OracleError::InvalidDensity(theta))
    }
}

impl OracleStream {
    pub fn cyclic(prefix: Vec<bool>, cycle: Vec<bool>) -> Result<Self, OracleError> {
        if cycle.is_empty() {
            return Err(OracleError::EmptyCycle);
        }
        let bits = Stream::from_vec(prefix.clone())
            .concat(&Stream::from_vec(cycle.clone()).cycle().expect("cycle is non-empty"));
        Ok(OracleStream {
            bits,
            source: OracleSource::Cyclic { prefix, cycle },
        })
    }

    pub fn all_true() -> Self {
        OracleStream::cyclic(Vec::new(), vec![true]).expect("non-empty cycle")
    }

    /// A periodic oracle with one `true` in every `round(1 / theta)` bits.
    pub fn periodic(theta: f64) -> Result<Self, OracleError> {
        check_density(theta)?;
        let period = (1.0 / theta).round().max(1.0) as usize;
        let mut cycle = vec![false; period];
        cycle[period - 1] = true;
        OracleStream::cyclic(Vec::new(), cycle)
    }

    /// Pseudorandom bits, reproducible from `seed`, each `true` with probability `theta`.
    pub fn seeded(seed: u64, theta: f64) -> Result<Self, OracleError> {
        check_density(theta)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bits = Stream::infinite(std::iter::repeat_with(move || rng.gen::<f64>() < theta));
        Ok(OracleStream {
            bits,
            source: OracleSource::Seeded { seed, theta },
        })
    }

    pub fn from_source(source: &OracleSource) -> Result<Self, OracleError> {
        match source {
            OracleSource::Cyclic { prefix, cycle } => OracleStream::cyclic(prefix.clone(), cycle.clone()),
            OracleSource::Seeded { seed, theta } => OracleStream::seeded(*seed, *theta),
        }
    }

    pub fn source(&self) -> &OracleSource {
        &self.source
    }

    pub fn stream(&self) -> &Stream<bool> {
        &self.bits
    }

    /// The `k`-th oracle bit.
    pub fn bit(&self, k: usize) -> bool {
        self.bits.get(k).expect("oracle streams are infinite")
    }

    pub fn prefix(&self, n: usize) -> Vec<bool> {
        self.bits.prefix(n)
    }

    /// Whether the oracle says `true` infinitely often: always for seeded
    /// oracles, and for cyclic ones whose cycle contains a `true`.
    pub fn is_fair(&self) -> bool {
        match &self.source {
            OracleSource::Cyclic { cycle, .. } => cycle.contains(&true),
            OracleSource::Seeded { .. } => true,
        }
    }
}

/// Renders oracle bits as `T`/`F` characters.
pub fn render_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { 'T' } else { 'F' }).collect()
}
