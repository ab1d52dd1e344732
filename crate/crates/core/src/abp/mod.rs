//! The Alternating Bit Protocol over lossy media.
//!
//! ```text
//!        i          ds            dr           o
//!   ──────▶ sender ────▶ medium ────▶ receiver ──────▶
//!             ▲                          │
//!             │   as              ar     │
//!             └──────── medium ◀─────────┘
//! ```
//!
//! Both media lose messages according to an [`OracleStream`]. The round-based
//! simulator in [`simulate_abp`] records every channel, and the checkers in
//! this module test recorded traces against the relational specifications of
//! the sender, the receiver, the media and the composed system.

mod check;
mod components;
mod medium;
pub mod network;
mod oracle;
mod simulate;

use serde::{Deserialize, Serialize};

pub use check::{check_trace, overall_check, receiver_spec_check, sender_spec_check, Check, SpecReport, TraceError};
pub use components::{Receiver, Sender};
pub use medium::{fairness_check, medium_apply, medium_relation_check, FairnessReport};
pub use oracle::{render_bits, OracleError, OracleSource, OracleStream};
pub use simulate::simulate_abp;

/// A datum tagged with the alternating bit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DataPacket<D> {
    pub payload: D,
    pub bit: bool,
}

/// Everything that crossed each channel during one simulation round.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord<D> {
    pub round: usize,
    pub ds: Option<DataPacket<D>>,
    pub dr: Option<DataPacket<D>>,
    pub ar: Option<bool>,
    #[serde(rename = "as")]
    pub as_: Option<bool>,
    pub o: Option<D>,
}

/// A finite protocol execution: the input and the per-round channel traffic.
#[derive(Clone, Debug, PartialEq)]
pub struct AbpTrace<D> {
    pub input: Vec<D>,
    pub initial_bit: bool,
    pub rounds: Vec<RoundRecord<D>>,
    /// All input was delivered and acknowledged.
    pub completed: bool,
    pub data_oracle: OracleSource,
    pub ack_oracle: OracleSource,
}

impl<D: Clone> AbpTrace<D> {
    pub fn i(&self) -> &[D] {
        &self.input
    }

    pub fn ds(&self) -> Vec<DataPacket<D>> {
        self.rounds.iter().filter_map(|r| r.ds.clone()).collect()
    }

    pub fn dr(&self) -> Vec<DataPacket<D>> {
        self.rounds.iter().filter_map(|r| r.dr.clone()).collect()
    }

    pub fn ar(&self) -> Vec<bool> {
        self.rounds.iter().filter_map(|r| r.ar).collect()
    }

    pub fn as_(&self) -> Vec<bool> {
        self.rounds.iter().filter_map(|r| r.as_).collect()
    }

    pub fn o(&self) -> Vec<D> {
        self.rounds.iter().filter_map(|r| r.o.clone()).collect()
    }

    pub fn rounds_used(&self) -> usize {
        self.rounds.len()
    }

    /// Messages the data medium lost.
    pub fn data_drops(&self) -> usize {
        self.rounds.iter().filter(|r| r.ds.is_some() && r.dr.is_none()).count()
    }

    /// Acknowledgments the ack medium lost.
    pub fn ack_drops(&self) -> usize {
        self.rounds.iter().filter(|r| r.ar.is_some() && r.as_.is_none()).count()
    }
}
