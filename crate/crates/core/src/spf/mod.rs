//! Stream-processing functions and their composition.
//!
//! An [`Spf`] maps an input stream to an output stream. The element-wise
//! constructor [`Spf::lift_elementwise`] builds functions that consume one
//! message at a time and are prefix-monotone by construction; feedback
//! networks of such functions are solved by Kleene iteration in
//! [`network::fixpoint_solve`].

mod catalog;
mod checks;
pub mod network;

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use crate::stream::{Message, Pull, Stream};

pub use catalog::{ComponentSpec, Endpoint, NamedComponent, NetworkConfig, WireSpec};
pub use checks::{check_approximation, check_monotone, ApproximationReport, MonotoneReport, MonotoneViolation};
pub use network::{fixpoint_solve, Component, Convergence, FixpointRun, Network, NetworkError, Sink, Source};

/// How a stream-processing function was built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpfKind {
    Elementwise,
    Composed,
    AutomatonDerived,
    User,
}

type ApplyFn<I, O> = dyn Fn(&Stream<I>) -> Stream<O> + Send + Sync;

/// A stream-processing function.
pub struct Spf<I, O> {
    apply: Arc<ApplyFn<I, O>>,
    kind: SpfKind,
}

impl<I, O> Clone for Spf<I, O> {
    fn clone(&self) -> Self {
        Spf {
            apply: Arc::clone(&self.apply),
            kind: self.kind,
        }
    }
}

impl<I, O> fmt::Debug for Spf<I, O> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Spf").field("kind", &self.kind).finish_non_exhaustive()
    }
}

impl<I: Message, O: Message> Spf<I, O> {
    /// An arbitrary function on streams. Nothing is known about its monotonicity.
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(&Stream<I>) -> Stream<O> + Send + Sync + 'static,
    {
        Spf::with_kind(SpfKind::User, f)
    }

    pub(crate) fn with_kind<F>(kind: SpfKind, f: F) -> Self
    where
        F: Fn(&Stream<I>) -> Stream<O> + Send + Sync + 'static,
    {
        Spf {
            apply: Arc::new(f),
            kind,
        }
    }

    /// The function that reads one message `x` at a time and emits `out(x)`
    /// for it. Lazily productive on infinite input.
    pub fn lift_elementwise<F>(out: F) -> Self
    where
        F: Fn(I) -> Vec<O> + Send + Sync + 'static,
    {
        let out = Arc::new(out);
        Spf::with_kind(SpfKind::Elementwise, move |input: &Stream<I>| {
            let input = input.clone();
            let out = Arc::clone(&out);
            let mut next = 0usize;
            let mut pending: VecDeque<O> = VecDeque::new();
            Stream::from_source(
                Box::new(move || {
                    if let Some(o) = pending.pop_front() {
                        return Pull::Item(o);
                    }
                    match input.step(next) {
                        Pull::Item(x) => {
                            next += 1;
                            pending.extend(out(x));
                            match pending.pop_front() {
                                Some(o) => Pull::Item(o),
                                None => Pull::Skip,
                            }
                        }
                        Pull::Skip => Pull::Skip,
                        Pull::End => Pull::End,
                    }
                }),
                false,
            )
        })
    }

    pub fn apply(&self, input: &Stream<I>) -> Stream<O> {
        (self.apply)(input)
    }

    pub fn kind(&self) -> SpfKind {
        self.kind
    }

    /// `next` after `self`. Evaluation stays lazy, so infinite intermediate
    /// streams are fine.
    pub fn then<C: Message>(&self, next: &Spf<O, C>) -> Spf<I, C> {
        compose_serial(self, next)
    }
}

impl<M: Message> Spf<M, M> {
    pub fn identity() -> Self {
        Spf::lift_elementwise(|x| vec![x])
    }
}

/// Serial composition: `g` applied to the output of `f`.
pub fn compose_serial<A: Message, B: Message, C: Message>(f: &Spf<A, B>, g: &Spf<B, C>) -> Spf<A, C> {
    let f = f.clone();
    let g = g.clone();
    Spf::with_kind(SpfKind::Composed, move |input| g.apply(&f.apply(input)))
}
