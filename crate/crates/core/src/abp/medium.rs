//! The lossy medium: transmits the `k`-th message iff the `k`-th oracle bit is set.

use crate::stream::{EvalBudget, Length, Message, Stream};

use super::OracleStream;

/// Passes on the messages of `input` whose oracle position is `true`, in order.
pub fn medium_apply<A: Message>(input: &Stream<A>, oracle: &OracleStream) -> Stream<A> {
    input.zip(oracle.stream()).filter(|(_, keep)| *keep).fst()
}

/// Whether `output` is a possible medium output for `input`, that is, a
/// subsequence of it. Returns the oracle prefix witnessing it.
pub fn medium_relation_check<A: PartialEq>(input: &[A], output: &[A]) -> Option<Vec<bool>> {
    let mut witness = Vec::with_capacity(input.len());
    let mut pending = output.iter().peekable();
    for m in input {
        let keep = pending.peek() == Some(&m);
        if keep {
            pending.next();
        }
        witness.push(keep);
    }
    pending.peek().is_none().then_some(witness)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FairnessReport {
    /// Input messages offered to the medium within the budget.
    pub offered: usize,
    /// Messages the medium transmitted.
    pub transmitted: usize,
    /// `true` bits among the first `offered` oracle positions.
    pub oracle_trues: usize,
    /// Lengths of the two projections of the input/oracle pairing.
    pub projection_lengths: (Length, Length),
}

impl FairnessReport {
    pub fn passed(&self) -> bool {
        self.transmitted == self.oracle_trues && self.projection_lengths.0 == self.projection_lengths.1
    }
}

/// Within the budget, the medium transmits exactly as many messages as the
/// oracle has `true` bits over the offered positions, and pairing input with
/// oracle yields projections of equal length.
pub fn fairness_check<A: Message>(oracle: &OracleStream, input: &Stream<A>, budget: EvalBudget) -> FairnessReport {
    let offered_input = input.take(budget.max_elements());
    let offered = offered_input.to_vec_within(budget).map(|v| v.len()).unwrap_or(0);
    let transmitted = medium_apply(&offered_input, oracle).iter().count();
    let oracle_trues = oracle.prefix(offered).into_iter().filter(|&b| b).count();
    let pairs = input.zip(oracle.stream());
    FairnessReport {
        offered,
        transmitted,
        oracle_trues,
        projection_lengths: (pairs.fst().len_within(budget), pairs.snd().len_within(budget)),
    }
}
