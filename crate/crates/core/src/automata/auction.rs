use serde::{Deserialize, Serialize};

use crate::timed::TimedMsg;

use super::{AutomatonError, InitEntry, Ioa, Symbol, Transition};

pub type Auction<B> = Ioa<AuctionState<B>, TimedMsg<B>, B>;

/// Ticks left before the auction closes, and the most recent bidder.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AuctionState<B> {
    pub remaining: u32,
    pub last_bidder: Option<B>,
}

/// An auction that counts down `timeout` ticks and announces the last bidder.
///
/// Inputs are bids (`Msg(bidder)`) and ticks. A bid while the auction is open
/// replaces the stored bidder without touching the countdown. The tick that
/// brings the countdown to zero emits the stored bidder, if any. Once closed,
/// every input is ignored.
pub fn build_auction<B: Symbol>(
    timeout: u32,
    bidders: &[B],
) -> Result<Auction<B>, AutomatonError<AuctionState<B>, TimedMsg<B>>> {
    if timeout == 0 {
        return Err(AutomatonError::ZeroTimeout);
    }
    let stored: Vec<Option<B>> = std::iter::once(None).chain(bidders.iter().cloned().map(Some)).collect();
    let state = |remaining, last_bidder: &Option<B>| AuctionState {
        remaining,
        last_bidder: last_bidder.clone(),
    };

    let mut transitions = Vec::new();
    for remaining in 0..=timeout {
        for last in &stored {
            let src = state(remaining, last);
            for b in bidders {
                let dst = if remaining > 0 {
                    state(remaining, &Some(b.clone()))
                } else {
                    src.clone()
                };
                transitions.push(Transition {
                    src: src.clone(),
                    input: TimedMsg::Msg(b.clone()),
                    dst,
                    output: vec![],
                });
            }
            let (dst, output) = match remaining {
                0 => (src.clone(), vec![]),
                1 => (state(0, last), last.iter().cloned().collect()),
                n => (state(n - 1, last), vec![]),
            };
            transitions.push(Transition {
                src,
                input: TimedMsg::Tick,
                dst,
                output,
            });
        }
    }

    let states = (0..=timeout).flat_map(|remaining| stored.iter().map(move |last| (remaining, last.clone())));
    Ok(Ioa::new(
        states.map(|(remaining, last_bidder)| AuctionState { remaining, last_bidder }),
        bidders
            .iter()
            .cloned()
            .map(TimedMsg::Msg)
            .chain(std::iter::once(TimedMsg::Tick)),
        bidders.iter().cloned(),
        transitions,
        vec![InitEntry {
            state: state(timeout, &None),
            output: vec![],
        }],
    ))
}
