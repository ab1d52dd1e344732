//! Possibly-infinite message streams.
//!
//! A [`Stream`] is an immutable, cheaply clonable handle to a lazily produced
//! sequence of messages. Produced elements are memoized, so every enumeration
//! observes the same sequence, and handles can be shared across threads.
//!
//! Questions that are only semi-decidable on infinite streams (length,
//! prefix order, equality) take an [`EvalBudget`] and answer with a verdict
//! that distinguishes "decided" from "no counterexample within the budget".

mod extnat;
mod ops;

use std::fmt;
use std::sync::{Arc, Mutex, MutexGuard};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use extnat::ExtNat;
pub use ops::{bounded_eq, prefix_le, EqVerdict, Length, Verdict};

/// Bound on the work done by a producer for each element a budgeted query
/// examines. Filters that reject long runs of input consume one unit per
/// rejected element.
const FUEL_PER_ELEMENT: u64 = 4096;

/// Anything that can travel on a stream.
pub trait Message: Clone + Send + 'static {}

impl<T: Clone + Send + 'static> Message for T {}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StreamError {
    #[error("index {index} is beyond the end of a stream of length {len}")]
    IndexBeyondEnd { index: usize, len: usize },
    #[error("cannot repeat the empty stream forever")]
    EmptyBase,
    #[error("evaluation budget must examine at least one element")]
    InvalidBudget,
}

/// Evaluation horizon for queries on possibly-infinite streams.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalBudget {
    max_elements: usize,
}

impl EvalBudget {
    pub fn new(max_elements: usize) -> Result<Self, StreamError> {
        if max_elements == 0 {
            return Err(StreamError::InvalidBudget);
        }
        Ok(EvalBudget { max_elements })
    }

    pub fn max_elements(self) -> usize {
        self.max_elements
    }

    pub(crate) fn fuel(self) -> u64 {
        (self.max_elements as u64 + 1).saturating_mul(FUEL_PER_ELEMENT)
    }
}

impl Default for EvalBudget {
    fn default() -> Self {
        EvalBudget { max_elements: 1000 }
    }
}

/// Result of one unit of producer work.
pub(crate) enum Pull<M> {
    Item(M),
    /// Work was done but nothing was emitted (e.g. a filter rejected an element).
    Skip,
    End,
}

/// Result of a fuel-limited lookup.
pub(crate) enum Probe<M> {
    Item(M),
    End,
    OutOfFuel,
}

type Source<M> = Box<dyn FnMut() -> Pull<M> + Send>;

struct Memo<M> {
    produced: Vec<M>,
    source: Option<Source<M>>,
}

/// A finite or infinite sequence of messages.
pub struct Stream<M> {
    memo: Arc<Mutex<Memo<M>>>,
    declared_infinite: bool,
}

impl<M> Clone for Stream<M> {
    fn clone(&self) -> Self {
        Stream {
            memo: Arc::clone(&self.memo),
            declared_infinite: self.declared_infinite,
        }
    }
}

impl<M: Message> Stream<M> {
    /// The empty stream.
    pub fn empty() -> Self {
        Stream::from_vec(Vec::new())
    }

    /// The one-element stream.
    pub fn single(m: M) -> Self {
        Stream::from_vec(vec![m])
    }

    pub fn from_vec(items: Vec<M>) -> Self {
        Stream {
            memo: Arc::new(Mutex::new(Memo {
                produced: items,
                source: None,
            })),
            declared_infinite: false,
        }
    }

    /// A lazily produced stream that may or may not end. Its length is only
    /// ever reported as a lower bound once it outlives a budget.
    pub fn lazy<I>(iter: I) -> Self
    where
        I: Iterator<Item = M> + Send + 'static,
    {
        let mut iter = iter;
        Stream::from_source(
            Box::new(move || match iter.next() {
                Some(m) => Pull::Item(m),
                None => Pull::End,
            }),
            false,
        )
    }

    /// An infinite stream whose `n`-th element is `f(n)`.
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(usize) -> M + Send + 'static,
    {
        let mut next = 0usize;
        Stream::from_source(
            Box::new(move || {
                let m = f(next);
                next += 1;
                Pull::Item(m)
            }),
            true,
        )
    }

    /// An infinite stream drawn from a generator that never ends.
    ///
    /// Panics on enumeration if the generator does end.
    pub fn infinite<I>(iter: I) -> Self
    where
        I: Iterator<Item = M> + Send + 'static,
    {
        let mut iter = iter;
        Stream::from_source(
            Box::new(move || match iter.next() {
                Some(m) => Pull::Item(m),
                None => Pull::End,
            }),
            true,
        )
    }

    pub(crate) fn from_source(source: Source<M>, declared_infinite: bool) -> Self {
        Stream {
            memo: Arc::new(Mutex::new(Memo {
                produced: Vec::new(),
                source: Some(source),
            })),
            declared_infinite,
        }
    }

    /// True when the stream was built by a constructor that never exhausts.
    pub fn is_declared_infinite(&self) -> bool {
        self.declared_infinite
    }

    fn lock(&self) -> MutexGuard<'_, Memo<M>> {
        self.memo.lock().expect("stream producer panicked")
    }

    /// One unit of work towards element `index`.
    pub(crate) fn step(&self, index: usize) -> Pull<M> {
        let mut memo = self.lock();
        if let Some(m) = memo.produced.get(index) {
            return Pull::Item(m.clone());
        }
        let Some(source) = memo.source.as_mut() else {
            return Pull::End;
        };
        match source() {
            Pull::Item(m) => {
                memo.produced.push(m);
                match memo.produced.get(index) {
                    Some(m) => Pull::Item(m.clone()),
                    None => Pull::Skip,
                }
            }
            Pull::Skip => Pull::Skip,
            Pull::End => {
                assert!(
                    !self.declared_infinite,
                    "stream declared infinite was exhausted after {} elements",
                    memo.produced.len()
                );
                memo.source = None;
                Pull::End
            }
        }
    }

    pub(crate) fn probe(&self, index: usize, fuel: &mut u64) -> Probe<M> {
        loop {
            if *fuel == 0 {
                return Probe::OutOfFuel;
            }
            *fuel -= 1;
            match self.step(index) {
                Pull::Item(m) => return Probe::Item(m),
                Pull::End => return Probe::End,
                Pull::Skip => {}
            }
        }
    }

    /// The element at `index`, or `None` if the stream ends first.
    ///
    /// Does not return if the producer never emits again without ending,
    /// such as a filter that rejects every element of an infinite stream.
    pub fn get(&self, index: usize) -> Option<M> {
        loop {
            match self.step(index) {
                Pull::Item(m) => return Some(m),
                Pull::End => return None,
                Pull::Skip => {}
            }
        }
    }

    pub fn iter(&self) -> Iter<M> {
        Iter {
            stream: self.clone(),
            next: 0,
        }
    }

    /// At most the first `n` elements.
    pub fn prefix(&self, n: usize) -> Vec<M> {
        self.iter().take(n).collect()
    }

    /// All elements of a finite stream.
    ///
    /// Panics on a declared-infinite stream; does not return on an
    /// undeclared stream that never ends.
    pub fn to_vec(&self) -> Vec<M> {
        assert!(!self.declared_infinite, "cannot materialize a declared-infinite stream");
        self.iter().collect()
    }

    /// All elements, provided the stream ends within the budget.
    pub fn to_vec_within(&self, budget: EvalBudget) -> Option<Vec<M>> {
        if self.declared_infinite {
            return None;
        }
        let mut fuel = budget.fuel();
        let mut out = Vec::new();
        for index in 0..=budget.max_elements() {
            match self.probe(index, &mut fuel) {
                Probe::Item(m) if index < budget.max_elements() => out.push(m),
                Probe::End => return Some(out),
                Probe::Item(_) | Probe::OutOfFuel => return None,
            }
        }
        None
    }

    /// Number of elements produced so far.
    pub fn produced_len(&self) -> usize {
        self.lock().produced.len()
    }
}

impl<M: Message> From<Vec<M>> for Stream<M> {
    fn from(items: Vec<M>) -> Self {
        Stream::from_vec(items)
    }
}

impl<M: Message, const N: usize> From<[M; N]> for Stream<M> {
    fn from(items: [M; N]) -> Self {
        Stream::from_vec(items.into())
    }
}

impl<M: Message> FromIterator<M> for Stream<M> {
    fn from_iter<T: IntoIterator<Item = M>>(iter: T) -> Self {
        Stream::from_vec(iter.into_iter().collect())
    }
}

impl<M: Message + fmt::Debug> fmt::Debug for Stream<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let memo = self.lock();
        let mut list = f.debug_list();
        list.entries(memo.produced.iter());
        if memo.source.is_some() {
            list.entry(&format_args!(".."));
        }
        list.finish()
    }
}

/// Enumerates a stream from the start. Re-enumeration reuses memoized elements.
pub struct Iter<M> {
    stream: Stream<M>,
    next: usize,
}

impl<M: Message> Iterator for Iter<M> {
    type Item = M;

    fn next(&mut self) -> Option<M> {
        let m = self.stream.get(self.next)?;
        self.next += 1;
        Some(m)
    }
}

impl<M: Message + Serialize> Serialize for Stream<M> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.declared_infinite {
            return Err(serde::ser::Error::custom("cannot serialize a declared-infinite stream"));
        }
        serializer.collect_seq(self.iter())
    }
}

impl<'de, M: Message + Deserialize<'de>> Deserialize<'de> for Stream<M> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Vec::<M>::deserialize(deserializer).map(Stream::from_vec)
    }
}
