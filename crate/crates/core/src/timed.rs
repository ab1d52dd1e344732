//! Timed streams: ordinary streams over messages extended with a tick that
//! closes the current time frame.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stream::{EvalBudget, Message, Probe, Pull, Stream, Verdict};

/// A message or the tick marking the end of a time frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimedMsg<M> {
    Msg(M),
    Tick,
}

impl<M> TimedMsg<M> {
    pub fn is_tick(&self) -> bool {
        matches!(self, TimedMsg::Tick)
    }

    pub fn payload(&self) -> Option<&M> {
        match self {
            TimedMsg::Msg(m) => Some(m),
            TimedMsg::Tick => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TimedError {
    #[error("asked for {requested} time frames but only {found} ticks were found")]
    InsufficientFrames { requested: usize, found: usize },
}

/// A stream of messages and ticks. Frames may be empty and a timed stream may
/// stop ticking; it is an ordinary stream in every other respect.
#[derive(Clone)]
pub struct TimedStream<M> {
    inner: Stream<TimedMsg<M>>,
    ticks_recur: bool,
}

impl<M: Message + std::fmt::Debug> std::fmt::Debug for TimedStream<M> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.inner.fmt(f)
    }
}

impl<M: Message> TimedStream<M> {
    pub fn new(inner: Stream<TimedMsg<M>>) -> Self {
        TimedStream {
            inner,
            ticks_recur: false,
        }
    }

    pub fn from_vec(items: Vec<TimedMsg<M>>) -> Self {
        TimedStream::new(Stream::from_vec(items))
    }

    /// `base` repeated forever. When `base` contains a tick, the result is
    /// known to contain infinitely many time frames.
    pub fn cycle(base: Vec<TimedMsg<M>>) -> Result<Self, crate::stream::StreamError> {
        let ticks_recur = base.iter().any(TimedMsg::is_tick);
        Ok(TimedStream {
            inner: Stream::from_vec(base).cycle()?,
            ticks_recur,
        })
    }

    /// The time-synchronous stream carrying one element of `msgs` per frame.
    pub fn synchronous(msgs: &Stream<M>) -> Self {
        TimedStream::new(
            msgs.map(|m| Stream::from_vec(vec![TimedMsg::Msg(m), TimedMsg::Tick]))
                .flatten(),
        )
    }

    pub fn as_stream(&self) -> &Stream<TimedMsg<M>> {
        &self.inner
    }

    pub fn into_stream(self) -> Stream<TimedMsg<M>> {
        self.inner
    }

    /// The prefix up to and including the `n`-th tick; all of `self` if it
    /// has fewer than `n` ticks.
    pub fn take_frames(&self, n: usize) -> TimedStream<M> {
        if n == 0 {
            return TimedStream::new(Stream::empty());
        }
        let inner = self.inner.clone();
        let mut next = 0usize;
        let mut ticks = 0usize;
        TimedStream::new(Stream::from_source(
            Box::new(move || {
                if ticks == n {
                    return Pull::End;
                }
                match inner.step(next) {
                    Pull::Item(m) => {
                        next += 1;
                        if m.is_tick() {
                            ticks += 1;
                        }
                        Pull::Item(m)
                    }
                    other => other,
                }
            }),
            false,
        ))
    }

    /// The untimed stream of message payloads, ticks removed.
    pub fn time_abs(&self) -> Stream<M> {
        self.inner.filter(|m| !m.is_tick()).map(|m| match m {
            TimedMsg::Msg(m) => m,
            TimedMsg::Tick => unreachable!("ticks are filtered out"),
        })
    }

    /// Whether the stream has infinitely many time frames, as far as can be
    /// told: `Yes` when ticks recur by construction or `min_ticks` ticks are
    /// seen within the budget, `No` when the stream ends first.
    pub fn time_complete_within(&self, budget: EvalBudget, min_ticks: usize) -> Verdict {
        if self.ticks_recur {
            return Verdict::Yes;
        }
        let mut fuel = budget.fuel();
        let mut ticks = 0usize;
        for index in 0..=budget.max_elements() {
            if ticks >= min_ticks {
                return Verdict::Yes;
            }
            match self.inner.probe(index, &mut fuel) {
                Probe::End => return Verdict::No,
                Probe::OutOfFuel => return Verdict::UnknownAtBudget,
                Probe::Item(_) if index == budget.max_elements() => return Verdict::UnknownAtBudget,
                Probe::Item(m) => {
                    if m.is_tick() {
                        ticks += 1;
                    }
                }
            }
        }
        Verdict::UnknownAtBudget
    }

    /// The payloads of the first `n` time frames, each excluding its closing tick.
    pub fn frames(&self, n: usize, budget: EvalBudget) -> Result<Vec<Vec<M>>, TimedError> {
        let mut fuel = budget.fuel();
        let mut frames = Vec::with_capacity(n);
        let mut current = Vec::new();
        let mut index = 0usize;
        while frames.len() < n && index < budget.max_elements() {
            match self.inner.probe(index, &mut fuel) {
                Probe::Item(TimedMsg::Tick) => frames.push(std::mem::take(&mut current)),
                Probe::Item(TimedMsg::Msg(m)) => current.push(m),
                Probe::End | Probe::OutOfFuel => break,
            }
            index += 1;
        }
        if frames.len() < n {
            return Err(TimedError::InsufficientFrames {
                requested: n,
                found: frames.len(),
            });
        }
        Ok(frames)
    }

    /// Whether each of the first `n_frames` frames carries exactly one message.
    pub fn is_time_synchronous(&self, n_frames: usize, budget: EvalBudget) -> Result<bool, TimedError> {
        Ok(self.frames(n_frames, budget)?.iter().all(|f| f.len() == 1))
    }
}

impl<M: Message> From<Stream<TimedMsg<M>>> for TimedStream<M> {
    fn from(inner: Stream<TimedMsg<M>>) -> Self {
        TimedStream::new(inner)
    }
}
