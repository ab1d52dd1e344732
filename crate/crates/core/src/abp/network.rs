//! The protocol as a feedback network of stream processing components.
//!
//! Every channel between components carries one slot per protocol round:
//! a packet or acknowledgment when something crossed, [`AbpMsg::Idle`]
//! otherwise. The sender emits its packet for round `r + 1` from the
//! acknowledgment slots of rounds `0..=r`, which makes the loop strongly
//! causal, so Kleene iteration from the empty channels adds rounds one by one.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::spf::{fixpoint_solve, Component, FixpointRun, Network, NetworkError, Sink, Source};
use crate::stream::{EvalBudget, Message, Stream};

use super::{DataPacket, OracleStream, Receiver};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbpMsg<D> {
    Data(D),
    Packet(DataPacket<D>),
    Ack(bool),
    /// Nothing crossed the channel this round.
    Idle,
}

const DATA: &str = "data";
const PACKET_SLOTS: &str = "packet_slots";
const ACK_SLOTS: &str = "ack_slots";

struct SenderComponent {
    initial_bit: bool,
}

impl<D: Message + PartialEq> Component<AbpMsg<D>> for SenderComponent {
    fn input_types(&self) -> Vec<String> {
        vec![DATA.into(), ACK_SLOTS.into()]
    }

    fn output_types(&self) -> Vec<String> {
        vec![PACKET_SLOTS.into()]
    }

    fn eval(&self, inputs: &[Stream<AbpMsg<D>>]) -> Vec<Stream<AbpMsg<D>>> {
        let data: Vec<D> = inputs[0]
            .iter()
            .filter_map(|m| match m {
                AbpMsg::Data(d) => Some(d),
                _ => None,
            })
            .collect();
        let mut out = Vec::new();
        let (mut index, mut bit) = (0, self.initial_bit);
        if let Some(first) = data.first() {
            out.push(AbpMsg::Packet(DataPacket {
                payload: first.clone(),
                bit,
            }));
            for slot in inputs[1].iter() {
                if slot == AbpMsg::Ack(bit) {
                    index += 1;
                    bit = !bit;
                }
                let Some(payload) = data.get(index) else { break };
                out.push(AbpMsg::Packet(DataPacket {
                    payload: payload.clone(),
                    bit,
                }));
            }
        }
        vec![Stream::from_vec(out)]
    }
}

/// Passes the `k`-th carried message iff oracle bit `k` is set.
struct MediumComponent {
    oracle: OracleStream,
    slot_type: &'static str,
}

impl<D: Message + PartialEq> Component<AbpMsg<D>> for MediumComponent {
    fn input_types(&self) -> Vec<String> {
        vec![self.slot_type.into()]
    }

    fn output_types(&self) -> Vec<String> {
        vec![self.slot_type.into()]
    }

    fn eval(&self, inputs: &[Stream<AbpMsg<D>>]) -> Vec<Stream<AbpMsg<D>>> {
        let mut carried = 0;
        let out = inputs[0]
            .iter()
            .map(|slot| {
                if slot == AbpMsg::Idle {
                    return slot;
                }
                carried += 1;
                if self.oracle.bit(carried - 1) {
                    slot
                } else {
                    AbpMsg::Idle
                }
            })
            .collect();
        vec![Stream::from_vec(out)]
    }
}

struct ReceiverComponent;

impl<D: Message + PartialEq> Component<AbpMsg<D>> for ReceiverComponent {
    fn input_types(&self) -> Vec<String> {
        vec![PACKET_SLOTS.into()]
    }

    fn output_types(&self) -> Vec<String> {
        vec![ACK_SLOTS.into(), DATA.into()]
    }

    fn eval(&self, inputs: &[Stream<AbpMsg<D>>]) -> Vec<Stream<AbpMsg<D>>> {
        let mut receiver = Receiver::new();
        let (mut acks, mut delivered) = (Vec::new(), Vec::new());
        for slot in inputs[0].iter() {
            match slot {
                AbpMsg::Packet(p) => {
                    let (ack, datum) = receiver.receive(p);
                    acks.push(AbpMsg::Ack(ack));
                    delivered.extend(datum.map(AbpMsg::Data));
                }
                _ => acks.push(AbpMsg::Idle),
            }
        }
        vec![Stream::from_vec(acks), Stream::from_vec(delivered)]
    }
}

/// The sender, both media and the receiver wired into one network with
/// external input `i` and external output `o`.
///
/// Channels are named after the components driving them: `sender:0` is `ds`,
/// `data_medium:0` is `dr`, `receiver:0` is `ar` and `ack_medium:0` is `as`.
pub fn network<D: Message + PartialEq>(
    initial_bit: bool,
    data_oracle: OracleStream,
    ack_oracle: OracleStream,
) -> Network<AbpMsg<D>> {
    let mut net = Network::new();
    net.add_input("i", DATA)
        .add_output("o", DATA)
        .add_component("sender", Arc::new(SenderComponent { initial_bit }))
        .add_component(
            "data_medium",
            Arc::new(MediumComponent {
                oracle: data_oracle,
                slot_type: PACKET_SLOTS,
            }),
        )
        .add_component("receiver", Arc::new(ReceiverComponent))
        .add_component(
            "ack_medium",
            Arc::new(MediumComponent {
                oracle: ack_oracle,
                slot_type: ACK_SLOTS,
            }),
        )
        .connect(Source::input("i"), Sink::port("sender", 0))
        .connect(Source::port("ack_medium", 0), Sink::port("sender", 1))
        .connect(Source::port("sender", 0), Sink::port("data_medium", 0))
        .connect(Source::port("data_medium", 0), Sink::port("receiver", 0))
        .connect(Source::port("receiver", 0), Sink::port("ack_medium", 0))
        .connect(Source::port("receiver", 1), Sink::output("o"));
    net
}

/// Solves the network for `input` and returns the run.
pub fn solve<D: Message + PartialEq>(
    input: &[D],
    initial_bit: bool,
    data_oracle: OracleStream,
    ack_oracle: OracleStream,
    max_rounds: usize,
) -> Result<FixpointRun<AbpMsg<D>>, NetworkError> {
    let net = network(initial_bit, data_oracle, ack_oracle);
    let externals = BTreeMap::from([("i".to_string(), input.iter().cloned().map(AbpMsg::Data).collect())]);
    let limit = EvalBudget::new(max_rounds + input.len() + 1).expect("non-zero budget");
    fixpoint_solve(&net, &externals, max_rounds, limit)
}

/// The delivered data of a run.
pub fn delivered<D: Clone>(run: &FixpointRun<AbpMsg<D>>) -> Vec<D> {
    run.output("o")
        .unwrap_or_default()
        .iter()
        .filter_map(|m| match m {
            AbpMsg::Data(d) => Some(d.clone()),
            _ => None,
        })
        .collect()
}
