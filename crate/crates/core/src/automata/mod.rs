//! I/O*-automata: state machines whose transitions consume one input message
//! and emit a finite sequence of output messages.
//!
//! An automaton is the 5-tuple of its state set, input and output alphabets,
//! transition relation and initial entries, where each initial entry pairs a
//! start state with output emitted before any input arrives. Deterministic,
//! complete automata lower to stream-processing functions via [`ioafp`].

mod auction;
mod bisim;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Debug;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spf::{Spf, SpfKind};
use crate::stream::{Pull, Stream};

pub use auction::{build_auction, Auction, AuctionState};
pub use bisim::{bisimilar, Bisimulation, Distinction};

/// Bounds shared by states and alphabet letters.
pub trait Symbol: Clone + Ord + Debug + Send + Sync + 'static {}

impl<T: Clone + Ord + Debug + Send + Sync + 'static> Symbol for T {}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Transition<S, I, O> {
    pub src: S,
    pub input: I,
    pub dst: S,
    pub output: Vec<O>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitEntry<S, O> {
    pub state: S,
    pub output: Vec<O>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "S: Serialize, I: Serialize, O: Serialize",
    deserialize = "S: Deserialize<'de> + Ord, I: Deserialize<'de> + Ord, O: Deserialize<'de> + Ord"
))]
pub struct Ioa<S, I, O> {
    pub states: BTreeSet<S>,
    pub inputs: BTreeSet<I>,
    pub outputs: BTreeSet<O>,
    pub transitions: Vec<Transition<S, I, O>>,
    pub init: Vec<InitEntry<S, O>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError<S: Debug, I: Debug> {
    #[error("no transition from state {state:?} on input {input:?}")]
    Stuck { state: S, input: I },
    #[error("automaton is not well-defined")]
    NotWellDefined,
    #[error("automaton is not deterministic")]
    NotDeterministic,
    #[error("automaton is not complete")]
    Incomplete,
    #[error("automata have different input alphabets")]
    AlphabetMismatch,
    #[error("auction timeout must be at least 1")]
    ZeroTimeout,
}

/// Why a property of [`ValidationReport`] fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness<S, I, O> {
    UndeclaredState(S),
    UndeclaredInput(I),
    UndeclaredOutput(O),
    NoInitialEntry,
    /// Several transitions leave `state` on `input`; indices into `transitions`.
    Nondeterministic {
        state: S,
        input: I,
        transitions: Vec<usize>,
    },
    MultipleInitialEntries(usize),
    Missing {
        state: S,
        input: I,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport<S, I, O> {
    pub well_defined: bool,
    pub deterministic: bool,
    pub complete: bool,
    pub witnesses: Vec<Witness<S, I, O>>,
}

/// Picks one of several enabled alternatives.
pub trait Resolver {
    /// An index below `options` (which is at least 2).
    fn choose(&mut self, options: usize) -> usize;
}

/// Always takes the first alternative.
#[derive(Clone, Copy, Debug, Default)]
pub struct FirstChoice;

impl Resolver for FirstChoice {
    fn choose(&mut self, _options: usize) -> usize {
        0
    }
}

impl<F: FnMut(usize) -> usize> Resolver for F {
    fn choose(&mut self, options: usize) -> usize {
        self(options)
    }
}

fn resolve(resolver: &mut dyn Resolver, options: usize) -> usize {
    if options <= 1 {
        0
    } else {
        resolver.choose(options) % options
    }
}

/// One execution of an automaton on a finite input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run<S, I, O> {
    pub initial_state: S,
    pub initial_output: Vec<O>,
    pub steps: Vec<Transition<S, I, O>>,
}

impl<S, I, O: Clone> Run<S, I, O> {
    /// Initial output followed by every step's output.
    pub fn output(&self) -> Vec<O> {
        let mut out = self.initial_output.clone();
        for step in &self.steps {
            out.extend(step.output.iter().cloned());
        }
        out
    }
}

/// A run that could not finish, with the steps taken before it stopped.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{error}")]
pub struct RunError<S: Debug, I: Debug, O: Debug> {
    /// `None` when there was no initial entry to start from.
    pub partial: Option<Run<S, I, O>>,
    pub error: AutomatonError<S, I>,
}

impl<S: Symbol, I: Symbol, O: Symbol> Ioa<S, I, O> {
    pub fn new(
        states: impl IntoIterator<Item = S>,
        inputs: impl IntoIterator<Item = I>,
        outputs: impl IntoIterator<Item = O>,
        transitions: Vec<Transition<S, I, O>>,
        init: Vec<InitEntry<S, O>>,
    ) -> Self {
        Ioa {
            states: states.into_iter().collect(),
            inputs: inputs.into_iter().collect(),
            outputs: outputs.into_iter().collect(),
            transitions,
            init,
        }
    }

    /// Transitions leaving `state` on `input`, in declaration order.
    pub fn enabled<'a>(&'a self, state: &'a S, input: &'a I) -> impl Iterator<Item = &'a Transition<S, I, O>> + 'a {
        self.transitions
            .iter()
            .filter(move |t| &t.src == state && &t.input == input)
    }

    pub fn validate(&self) -> ValidationReport<S, I, O> {
        let mut witnesses = Vec::new();

        let mut well_defined = !self.init.is_empty();
        if self.init.is_empty() {
            witnesses.push(Witness::NoInitialEntry);
        }
        let mut undeclared_state = |s: &S, witnesses: &mut Vec<_>| {
            if !self.states.contains(s) {
                well_defined = false;
                witnesses.push(Witness::UndeclaredState(s.clone()));
            }
        };
        for t in &self.transitions {
            undeclared_state(&t.src, &mut witnesses);
            undeclared_state(&t.dst, &mut witnesses);
        }
        for entry in &self.init {
            undeclared_state(&entry.state, &mut witnesses);
        }
        for t in &self.transitions {
            if !self.inputs.contains(&t.input) {
                well_defined = false;
                witnesses.push(Witness::UndeclaredInput(t.input.clone()));
            }
        }
        let emitted = self
            .transitions
            .iter()
            .flat_map(|t| &t.output)
            .chain(self.init.iter().flat_map(|e| &e.output));
        for o in emitted {
            if !self.outputs.contains(o) {
                well_defined = false;
                witnesses.push(Witness::UndeclaredOutput(o.clone()));
            }
        }

        let mut by_key: BTreeMap<(&S, &I), Vec<usize>> = BTreeMap::new();
        for (index, t) in self.transitions.iter().enumerate() {
            by_key.entry((&t.src, &t.input)).or_default().push(index);
        }
        let mut deterministic = self.init.len() == 1;
        if self.init.len() > 1 {
            witnesses.push(Witness::MultipleInitialEntries(self.init.len()));
        }
        for ((state, input), indices) in &by_key {
            if indices.len() > 1 {
                deterministic = false;
                witnesses.push(Witness::Nondeterministic {
                    state: (*state).clone(),
                    input: (*input).clone(),
                    transitions: indices.clone(),
                });
            }
        }

        let mut complete = true;
        for state in &self.states {
            for input in &self.inputs {
                if !by_key.contains_key(&(state, input)) {
                    complete = false;
                    witnesses.push(Witness::Missing {
                        state: state.clone(),
                        input: input.clone(),
                    });
                }
            }
        }

        ValidationReport {
            well_defined,
            deterministic,
            complete,
            witnesses,
        }
    }

    /// Takes one transition from `state` on `input`. Among several enabled
    /// transitions the resolver picks one by index.
    pub fn step(&self, state: &S, input: &I, resolver: &mut dyn Resolver) -> Result<(S, Vec<O>), AutomatonError<S, I>> {
        let enabled: Vec<_> = self.enabled(state, input).collect();
        if enabled.is_empty() {
            return Err(AutomatonError::Stuck {
                state: state.clone(),
                input: input.clone(),
            });
        }
        let t = enabled[resolve(resolver, enabled.len())];
        Ok((t.dst.clone(), t.output.clone()))
    }

    /// Executes the automaton on `input`, recording every step.
    pub fn run(&self, input: &[I], resolver: &mut dyn Resolver) -> Result<Run<S, I, O>, RunError<S, I, O>> {
        let start = match self.init.len() {
            0 => {
                return Err(RunError {
                    partial: None,
                    error: AutomatonError::NotWellDefined,
                })
            }
            n => &self.init[resolve(resolver, n)],
        };
        let mut run = Run {
            initial_state: start.state.clone(),
            initial_output: start.output.clone(),
            steps: Vec::with_capacity(input.len()),
        };
        let mut state = start.state.clone();
        for x in input {
            match self.step(&state, x, resolver) {
                Ok((dst, output)) => {
                    run.steps.push(Transition {
                        src: state,
                        input: x.clone(),
                        dst: dst.clone(),
                        output,
                    });
                    state = dst;
                }
                Err(error) => {
                    return Err(RunError {
                        partial: Some(run),
                        error,
                    })
                }
            }
        }
        Ok(run)
    }
}

/// Successor state and output for each state and input letter.
type StepTable<S, I, O> = BTreeMap<(S, I), (S, Vec<O>)>;

/// Lowers a deterministic, complete automaton to a stream-processing function.
///
/// The function emits the initial output, then consumes one input message at
/// a time from the start state. An input letter outside the alphabet ends the
/// output.
pub fn ioafp<S: Symbol, I: Symbol, O: Symbol>(a: &Ioa<S, I, O>) -> Result<Spf<I, O>, AutomatonError<S, I>> {
    let report = a.validate();
    if !report.well_defined {
        return Err(AutomatonError::NotWellDefined);
    }
    if !report.deterministic {
        return Err(AutomatonError::NotDeterministic);
    }
    if !report.complete {
        return Err(AutomatonError::Incomplete);
    }
    let table: Arc<StepTable<S, I, O>> = Arc::new(
        a.transitions
            .iter()
            .map(|t| ((t.src.clone(), t.input.clone()), (t.dst.clone(), t.output.clone())))
            .collect(),
    );
    let start = a.init[0].clone();
    Ok(Spf::with_kind(SpfKind::AutomatonDerived, move |input: &Stream<I>| {
        let input = input.clone();
        let table = Arc::clone(&table);
        let mut state = start.state.clone();
        let mut pending: VecDeque<O> = start.output.iter().cloned().collect();
        let mut next = 0usize;
        let mut halted = false;
        Stream::from_source(
            Box::new(move || {
                if let Some(o) = pending.pop_front() {
                    return Pull::Item(o);
                }
                if halted {
                    return Pull::End;
                }
                match input.step(next) {
                    Pull::Item(x) => {
                        next += 1;
                        match table.get(&(state.clone(), x)) {
                            Some((dst, output)) => {
                                state = dst.clone();
                                pending.extend(output.iter().cloned());
                            }
                            None => halted = true,
                        }
                        Pull::Skip
                    }
                    Pull::Skip => Pull::Skip,
                    Pull::End => Pull::End,
                }
            }),
            false,
        )
    }))
}
