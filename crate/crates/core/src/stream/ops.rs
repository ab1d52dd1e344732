//! The stream operator algebra.

use super::{EvalBudget, ExtNat, Message, Probe, Pull, Stream, StreamError};

/// Outcome of a semi-decidable Boolean query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    /// No decision could be reached within the evaluation budget.
    UnknownAtBudget,
}

impl Verdict {
    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

/// Outcome of a bounded equality comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EqVerdict {
    /// Both streams ended within the budget and agree everywhere.
    EqualFinite,
    /// The streams agree on every element the budget allowed us to inspect.
    EqualAtBudget,
    Unequal,
}

/// Stream length as far as it can be established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Length {
    Exact(ExtNat),
    /// The stream survived the budget; only this many elements are known to exist.
    AtLeast(usize),
}

impl Length {
    pub fn exact(self) -> Option<ExtNat> {
        match self {
            Length::Exact(n) => Some(n),
            Length::AtLeast(_) => None,
        }
    }
}

impl<M: Message> Stream<M> {
    /// All of `self` followed by all of `other`. When `self` is infinite,
    /// `other` is never reached.
    pub fn concat(&self, other: &Stream<M>) -> Stream<M> {
        let first = self.clone();
        let second = other.clone();
        let mut in_second = false;
        let mut next = 0usize;
        Stream::from_source(
            Box::new(move || {
                let current = if in_second { &second } else { &first };
                match current.step(next) {
                    Pull::Item(m) => {
                        next += 1;
                        Pull::Item(m)
                    }
                    Pull::Skip => Pull::Skip,
                    Pull::End if !in_second => {
                        in_second = true;
                        next = 0;
                        Pull::Skip
                    }
                    Pull::End => Pull::End,
                }
            }),
            self.declared_infinite || other.declared_infinite,
        )
    }

    /// The first `min(n, #self)` elements.
    pub fn take(&self, n: usize) -> Stream<M> {
        if n == 0 {
            return Stream::empty();
        }
        let inner = self.clone();
        let mut next = 0usize;
        Stream::from_source(
            Box::new(move || {
                if next >= n {
                    return Pull::End;
                }
                match inner.step(next) {
                    Pull::Item(m) => {
                        next += 1;
                        Pull::Item(m)
                    }
                    other => other,
                }
            }),
            false,
        )
    }

    /// `self` without its first `min(n, #self)` elements.
    pub fn skip(&self, n: usize) -> Stream<M> {
        if n == 0 {
            return self.clone();
        }
        let inner = self.clone();
        let mut next = n;
        Stream::from_source(
            Box::new(move || match inner.step(next) {
                Pull::Item(m) => {
                    next += 1;
                    Pull::Item(m)
                }
                other => other,
            }),
            self.declared_infinite,
        )
    }

    /// The element at 0-based `index`.
    pub fn nth(&self, index: usize) -> Result<M, StreamError> {
        self.get(index).ok_or_else(|| StreamError::IndexBeyondEnd {
            index,
            len: self.produced_len(),
        })
    }

    /// The length, decided within `budget`.
    ///
    /// Only declared-infinite streams are reported as infinite; a lazy stream
    /// that outlives the budget gets a lower bound.
    pub fn len_within(&self, budget: EvalBudget) -> Length {
        if self.declared_infinite {
            return Length::Exact(ExtNat::Inf);
        }
        let mut fuel = budget.fuel();
        for index in 0..=budget.max_elements() {
            match self.probe(index, &mut fuel) {
                Probe::End => return Length::Exact(ExtNat::from(index)),
                Probe::Item(_) => {}
                Probe::OutOfFuel => return Length::AtLeast(index),
            }
        }
        Length::AtLeast(budget.max_elements() + 1)
    }

    /// The elements satisfying `keep`, in order.
    pub fn filter<P>(&self, keep: P) -> Stream<M>
    where
        P: Fn(&M) -> bool + Send + Sync + 'static,
    {
        let inner = self.clone();
        let mut next = 0usize;
        Stream::from_source(
            Box::new(move || match inner.step(next) {
                Pull::Item(m) => {
                    next += 1;
                    if keep(&m) {
                        Pull::Item(m)
                    } else {
                        Pull::Skip
                    }
                }
                other => other,
            }),
            false,
        )
    }

    pub fn map<N, F>(&self, f: F) -> Stream<N>
    where
        N: Message,
        F: Fn(M) -> N + Send + Sync + 'static,
    {
        let inner = self.clone();
        let mut next = 0usize;
        Stream::from_source(
            Box::new(move || match inner.step(next) {
                Pull::Item(m) => {
                    next += 1;
                    Pull::Item(f(m))
                }
                Pull::Skip => Pull::Skip,
                Pull::End => Pull::End,
            }),
            self.declared_infinite,
        )
    }

    /// `self` repeated without end.
    ///
    /// Does not return if `self` never produces its first element.
    pub fn cycle(&self) -> Result<Stream<M>, StreamError> {
        if self.get(0).is_none() {
            return Err(StreamError::EmptyBase);
        }
        if self.declared_infinite {
            return Ok(self.clone());
        }
        let base = self.clone();
        let mut next = 0usize;
        Ok(Stream::from_source(
            Box::new(move || match base.step(next) {
                Pull::Item(m) => {
                    next += 1;
                    Pull::Item(m)
                }
                Pull::Skip => Pull::Skip,
                Pull::End => {
                    next = 0;
                    Pull::Skip
                }
            }),
            true,
        ))
    }

    /// Pointwise pairs; as long as the shorter of the two.
    pub fn zip<N: Message>(&self, other: &Stream<N>) -> Stream<(M, N)> {
        let left = self.clone();
        let right = other.clone();
        let mut next = 0usize;
        let mut pending: Option<M> = None;
        Stream::from_source(
            Box::new(move || {
                let a = match pending.take() {
                    Some(a) => a,
                    None => match left.step(next) {
                        Pull::Item(a) => a,
                        Pull::Skip => return Pull::Skip,
                        Pull::End => return Pull::End,
                    },
                };
                match right.step(next) {
                    Pull::Item(b) => {
                        next += 1;
                        Pull::Item((a, b))
                    }
                    Pull::Skip => {
                        pending = Some(a);
                        Pull::Skip
                    }
                    Pull::End => Pull::End,
                }
            }),
            self.declared_infinite && other.declared_infinite,
        )
    }
}

impl<M: Message + PartialEq> Stream<M> {
    /// Collapses every maximal run of equal adjacent elements to one element.
    pub fn remove_stutter(&self) -> Stream<M> {
        let inner = self.clone();
        let mut next = 0usize;
        let mut last: Option<M> = None;
        Stream::from_source(
            Box::new(move || match inner.step(next) {
                Pull::Item(m) => {
                    next += 1;
                    if last.as_ref() == Some(&m) {
                        Pull::Skip
                    } else {
                        last = Some(m.clone());
                        Pull::Item(m)
                    }
                }
                other => other,
            }),
            false,
        )
    }
}

impl<M: Message> Stream<Stream<M>> {
    /// Concatenation of all inner streams in order. An infinite inner stream
    /// absorbs everything after it.
    pub fn flatten(&self) -> Stream<M> {
        let outer = self.clone();
        let mut next_outer = 0usize;
        let mut current: Option<(Stream<M>, usize)> = None;
        Stream::from_source(
            Box::new(move || {
                let Some((inner, next)) = current.as_mut() else {
                    return match outer.step(next_outer) {
                        Pull::Item(inner) => {
                            next_outer += 1;
                            current = Some((inner, 0));
                            Pull::Skip
                        }
                        Pull::Skip => Pull::Skip,
                        Pull::End => Pull::End,
                    };
                };
                match inner.step(*next) {
                    Pull::Item(m) => {
                        *next += 1;
                        Pull::Item(m)
                    }
                    Pull::Skip => Pull::Skip,
                    Pull::End => {
                        current = None;
                        Pull::Skip
                    }
                }
            }),
            false,
        )
    }
}

impl<A: Message, B: Message> Stream<(A, B)> {
    /// First pointwise projection.
    pub fn fst(&self) -> Stream<A> {
        self.map(|(a, _)| a)
    }

    /// Second pointwise projection.
    pub fn snd(&self) -> Stream<B> {
        self.map(|(_, b)| b)
    }
}

/// Whether `a` is an element-wise prefix of `b`, decided within `budget`.
pub fn prefix_le<M: Message + PartialEq>(a: &Stream<M>, b: &Stream<M>, budget: EvalBudget) -> Verdict {
    let mut fuel = budget.fuel();
    for index in 0..=budget.max_elements() {
        let x = match a.probe(index, &mut fuel) {
            Probe::End => return Verdict::Yes,
            Probe::OutOfFuel => return Verdict::UnknownAtBudget,
            Probe::Item(_) if index == budget.max_elements() => return Verdict::UnknownAtBudget,
            Probe::Item(x) => x,
        };
        match b.probe(index, &mut fuel) {
            Probe::End => return Verdict::No,
            Probe::OutOfFuel => return Verdict::UnknownAtBudget,
            Probe::Item(y) if x != y => return Verdict::No,
            Probe::Item(_) => {}
        }
    }
    Verdict::UnknownAtBudget
}

/// Bounded comparison of two streams: every index up to the budget is compared,
/// and running out first counts as a difference.
pub fn bounded_eq<M: Message + PartialEq>(a: &Stream<M>, b: &Stream<M>, budget: EvalBudget) -> EqVerdict {
    let mut fuel = budget.fuel();
    for index in 0..=budget.max_elements() {
        let x = a.probe(index, &mut fuel);
        let y = b.probe(index, &mut fuel);
        match (x, y) {
            (Probe::End, Probe::End) => return EqVerdict::EqualFinite,
            (Probe::OutOfFuel, _) | (_, Probe::OutOfFuel) => return EqVerdict::EqualAtBudget,
            (Probe::End, Probe::Item(_)) | (Probe::Item(_), Probe::End) => return EqVerdict::Unequal,
            (Probe::Item(x), Probe::Item(y)) => {
                if x != y {
                    return EqVerdict::Unequal;
                }
            }
        }
    }
    EqVerdict::EqualAtBudget
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> EvalBudget {
        EvalBudget::new(n).unwrap()
    }

    fn s(items: &[i32]) -> Stream<i32> {
        Stream::from_vec(items.to_vec())
    }

    #[test]
    fn concat_examples() {
        assert_eq!(s(&[1, 2]).concat(&s(&[3])).to_vec(), vec![1, 2, 3]);
        assert_eq!(Stream::empty().concat(&s(&[4, 5])).to_vec(), vec![4, 5]);
        let sevens = s(&[7]).cycle().unwrap();
        let absorbed = sevens.concat(&s(&[9]));
        assert!(absorbed.is_declared_infinite());
        for n in [0, 1, 17, 200] {
            assert_eq!(absorbed.take(n).to_vec(), sevens.take(n).to_vec());
        }
    }

    #[test]
    fn take_drop_examples() {
        assert_eq!(s(&[1, 2, 3]).take(2).to_vec(), vec![1, 2]);
        assert!(s(&[1, 2, 3]).take(0).to_vec().is_empty());
        assert_eq!(s(&[1]).take(5).to_vec(), vec![1]);
        assert_eq!(s(&[1, 2, 3]).skip(1).to_vec(), vec![2, 3]);
        assert_eq!(s(&[1, 2, 3]).skip(0).to_vec(), vec![1, 2, 3]);
        assert!(s(&[1, 2]).skip(9).to_vec().is_empty());
    }

    #[test]
    fn nth_examples() {
        assert_eq!(s(&[5, 6]).nth(0), Ok(5));
        assert_eq!(s(&[5, 6]).nth(1), Ok(6));
        assert_eq!(s(&[5, 6]).nth(2), Err(StreamError::IndexBeyondEnd { index: 2, len: 2 }));
        assert!(matches!(
            Stream::<i32>::empty().nth(0),
            Err(StreamError::IndexBeyondEnd { .. })
        ));
    }

    #[test]
    fn length_examples() {
        assert_eq!(s(&[1, 2, 3]).len_within(k(10)), Length::Exact(ExtNat::Fin(3)));
        assert_eq!(s(&[1]).cycle().unwrap().len_within(k(10)), Length::Exact(ExtNat::Inf));
        assert_eq!(Stream::<i32>::empty().len_within(k(1)), Length::Exact(ExtNat::Fin(0)));
        // exactly the budget: the end is still observed
        assert_eq!(s(&[1, 2, 3]).len_within(k(3)), Length::Exact(ExtNat::Fin(3)));
        assert_eq!(Stream::lazy(0..).len_within(k(10)), Length::AtLeast(11));
    }

    #[test]
    fn filter_map_flatten_examples() {
        assert_eq!(s(&[1, 2, 3, 4]).filter(|x| x % 2 == 0).to_vec(), vec![2, 4]);
        assert_eq!(s(&[1, 2]).filter(|_| true).to_vec(), vec![1, 2]);
        assert!(s(&[1, 2]).filter(|_| false).to_vec().is_empty());
        assert_eq!(s(&[1, 2]).map(|x| x + 1).to_vec(), vec![2, 3]);
        assert!(Stream::<i32>::empty().map(|x| x + 1).to_vec().is_empty());

        let nested = Stream::from(vec![s(&[1]), s(&[2, 3])]);
        assert_eq!(nested.flatten().to_vec(), vec![1, 2, 3]);
        assert!(Stream::<Stream<i32>>::empty().flatten().to_vec().is_empty());
        assert_eq!(Stream::from(vec![Stream::empty(), s(&[4])]).flatten().to_vec(), vec![4]);
        let absorbing = Stream::from(vec![s(&[0]).cycle().unwrap(), s(&[1])]).flatten();
        assert_eq!(absorbing.prefix(50), vec![0; 50]);
    }

    #[test]
    fn rejecting_filter_on_infinite_stream_is_budget_bounded() {
        let never = s(&[1]).cycle().unwrap().filter(|_| false);
        assert_eq!(never.len_within(k(10)), Length::AtLeast(0));
        assert_eq!(prefix_le(&never, &never, k(10)), Verdict::UnknownAtBudget);
        assert_eq!(bounded_eq(&never, &s(&[1]), k(10)), EqVerdict::EqualAtBudget);
    }

    #[test]
    fn cycle_examples() {
        assert_eq!(s(&[1, 2]).cycle().unwrap().take(5).to_vec(), vec![1, 2, 1, 2, 1]);
        let sevens = s(&[7]).cycle().unwrap();
        assert!((0..=200).all(|n| sevens.nth(n) == Ok(7)));
        assert_eq!(Stream::<i32>::empty().cycle().unwrap_err(), StreamError::EmptyBase);
    }

    #[test]
    fn stutter_examples() {
        assert_eq!(s(&[1, 1, 2, 2, 1]).remove_stutter().to_vec(), vec![1, 2, 1]);
        assert!(Stream::<i32>::empty().remove_stutter().to_vec().is_empty());
        assert_eq!(Stream::from(['a', 'a', 'a']).remove_stutter().to_vec(), vec!['a']);
    }

    #[test]
    fn zip_and_projection_examples() {
        let zipped = s(&[1, 2]).zip(&Stream::from(['x', 'y', 'z']));
        assert_eq!(zipped.to_vec(), vec![(1, 'x'), (2, 'y')]);
        assert!(Stream::<i32>::empty().zip(&s(&[1])).to_vec().is_empty());
        let zeros = s(&[0]).cycle().unwrap();
        assert_eq!(zeros.zip(&Stream::from(['a'])).to_vec(), vec![(0, 'a')]);

        let pairs = Stream::from(vec![(1, 'x'), (2, 'y')]);
        assert_eq!(pairs.fst().to_vec(), vec![1, 2]);
        assert_eq!(pairs.snd().to_vec(), vec!['x', 'y']);
        assert!(Stream::<(i32, char)>::empty().fst().to_vec().is_empty());
    }

    #[test]
    fn prefix_examples() {
        assert_eq!(prefix_le(&s(&[1]), &s(&[1, 2]), k(10)), Verdict::Yes);
        assert_eq!(prefix_le(&s(&[2]), &s(&[1, 2]), k(10)), Verdict::No);
        let ones = s(&[1]).cycle().unwrap();
        assert_eq!(prefix_le(&ones, &ones, k(10)), Verdict::UnknownAtBudget);
        assert_eq!(prefix_le(&s(&[1, 2]), &s(&[1]), k(10)), Verdict::No);
        assert_eq!(prefix_le(&Stream::empty(), &ones, k(1)), Verdict::Yes);
    }

    #[test]
    fn bounded_eq_examples() {
        assert_eq!(bounded_eq(&s(&[1, 2]), &s(&[1, 2]), k(10)), EqVerdict::EqualFinite);
        assert_eq!(bounded_eq(&s(&[1, 2]), &s(&[1, 3]), k(10)), EqVerdict::Unequal);
        assert_eq!(bounded_eq(&s(&[1]), &s(&[1, 3]), k(10)), EqVerdict::Unequal);
    }

    #[test]
    fn shifted_cycles_agree_at_budget() {
        let a = s(&[1, 2]).cycle().unwrap();
        let b = s(&[1]).concat(&s(&[2, 1]).cycle().unwrap());
        // independent enumeration of both prefixes by index arithmetic
        let left: Vec<i32> = (0..100).map(|i| [1, 2][i % 2]).collect();
        let right: Vec<i32> = (0..100).map(|i| if i == 0 { 1 } else { [2, 1][(i - 1) % 2] }).collect();
        assert_eq!(left, right);
        assert_eq!(a.prefix(100), left);
        assert_eq!(b.prefix(100), right);
        assert_eq!(bounded_eq(&a, &b, k(100)), EqVerdict::EqualAtBudget);
    }
}
