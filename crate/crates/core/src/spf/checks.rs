//! Executable monotonicity and approximation checks for stream-processing functions.

use crate::stream::{bounded_eq, prefix_le, EqVerdict, EvalBudget, Message, Stream, Verdict};

use super::Spf;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonotoneViolation {
    /// The sample pair itself is not prefix-ordered.
    UnorderedSample { sample: usize },
    /// `f(a)` is not a prefix of `f(b)` although `a` is a prefix of `b`.
    OutputNotPrefix { sample: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MonotoneReport {
    pub checked: usize,
    pub violations: Vec<MonotoneViolation>,
    /// Samples whose outputs agreed through the whole budget without either ending.
    pub inconclusive: Vec<usize>,
}

impl MonotoneReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `f(a) ⊑ f(b)` for every sample pair `a ⊑ b`.
pub fn check_monotone<I, O>(f: &Spf<I, O>, samples: &[(Vec<I>, Vec<I>)], budget: EvalBudget) -> MonotoneReport
where
    I: Message + PartialEq,
    O: Message + PartialEq,
{
    let mut report = MonotoneReport::default();
    for (sample, (a, b)) in samples.iter().enumerate() {
        let (a, b) = (Stream::from_vec(a.clone()), Stream::from_vec(b.clone()));
        if !prefix_le(&a, &b, budget).is_yes() {
            report.violations.push(MonotoneViolation::UnorderedSample { sample });
            continue;
        }
        report.checked += 1;
        match prefix_le(&f.apply(&a), &f.apply(&b), budget) {
            Verdict::Yes => {}
            Verdict::No => report.violations.push(MonotoneViolation::OutputNotPrefix { sample }),
            Verdict::UnknownAtBudget => report.inconclusive.push(sample),
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproximationReport<O> {
    /// `f` applied to every prefix of the input, shortest first. Outputs that
    /// outlive the budget are cut at the budget.
    pub chain: Vec<Vec<O>>,
    /// Index `k` of the first link `f(take(k)) ⋢ f(take(k + 1))`.
    pub failing_link: Option<usize>,
    /// Whether `f(s)` agrees with the last element of the chain.
    pub limit_agrees: bool,
}

impl<O> ApproximationReport<O> {
    pub fn passed(&self) -> bool {
        self.failing_link.is_none() && self.limit_agrees
    }
}

/// Checks that the outputs on the prefixes of `input` form a prefix chain
/// ending in the output on the whole input.
pub fn check_approximation<I, O>(f: &Spf<I, O>, input: &[I], budget: EvalBudget) -> ApproximationReport<O>
where
    I: Message,
    O: Message + PartialEq,
{
    let whole = Stream::from_vec(input.to_vec());
    let outputs: Vec<Stream<O>> = (0..=input.len()).map(|n| f.apply(&whole.take(n))).collect();
    let failing_link = outputs
        .windows(2)
        .position(|pair| prefix_le(&pair[0], &pair[1], budget) == Verdict::No);
    let limit = f.apply(&whole);
    let last = outputs.last().expect("chain has at least one element");
    let limit_agrees = bounded_eq(&limit, last, budget) != EqVerdict::Unequal;
    let chain = outputs.iter().map(|s| s.prefix(budget.max_elements())).collect();
    ApproximationReport {
        chain,
        failing_link,
        limit_agrees,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> EvalBudget {
        EvalBudget::new(100).unwrap()
    }

    /// Emits `<0>` exactly when the input has even length.
    fn parity_double() -> Spf<i32, i32> {
        Spf::from_fn(|s: &Stream<i32>| {
            if s.to_vec().len().is_multiple_of(2) {
                Stream::from(vec![0])
            } else {
                Stream::empty()
            }
        })
    }

    #[test]
    fn monotone_examples() {
        let id = Spf::<i32, i32>::identity();
        assert!(check_monotone(&id, &[(vec![1], vec![1, 2])], k()).passed());

        // f(ε) = <0> and f(<1>) = ε
        let report = check_monotone(&parity_double(), &[(vec![], vec![1])], k());
        assert_eq!(
            report.violations,
            vec![MonotoneViolation::OutputNotPrefix { sample: 0 }]
        );

        let empty = check_monotone(&id, &[], k());
        assert!(empty.passed());
        assert_eq!(empty.checked, 0);
    }

    #[test]
    fn unordered_samples_are_flagged() {
        let report = check_monotone(&Spf::<i32, i32>::identity(), &[(vec![2], vec![1, 2])], k());
        assert_eq!(
            report.violations,
            vec![MonotoneViolation::UnorderedSample { sample: 0 }]
        );
    }

    #[test]
    fn approximation_examples() {
        let report = check_approximation(&Spf::<i32, i32>::identity(), &[1, 2, 3], k());
        assert!(report.passed());
        assert_eq!(report.chain, vec![vec![], vec![1], vec![1, 2], vec![1, 2, 3]]);

        let double = Spf::lift_elementwise(|x: i32| vec![x, x]);
        let report = check_approximation(&double, &[1], k());
        assert!(report.passed());
        assert_eq!(report.chain, vec![vec![], vec![1, 1]]);

        // f(ε) = <0>, f(<1>) = ε, f(<1,2>) = <0>
        let report = check_approximation(&parity_double(), &[1, 2], k());
        assert_eq!(report.chain, vec![vec![0], vec![], vec![0]]);
        assert_eq!(report.failing_link, Some(0));
        assert!(!report.passed());
    }
}
