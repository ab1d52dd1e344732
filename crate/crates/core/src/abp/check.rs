//! Checks of finite protocol traces against the relational specifications.
//!
//! Properties that speak about "eventually" or "never" are evaluated up to
//! the end of the trace: an obligation raised in the last round is not held
//! against the trace.

use std::fmt;

use thiserror::Error;

use crate::stream::{prefix_le, EvalBudget, Message, Stream};

use super::{medium_relation_check, AbpTrace, DataPacket};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("round {round}: {reason}")]
    Malformed { round: usize, reason: String },
}

/// One named verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name,
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            write!(f, "{verdict} {}", self.name)
        } else {
            write!(f, "{verdict} {}: {}", self.name, self.detail)
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpecReport {
    pub checks: Vec<Check>,
}

impl SpecReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn well_formed<D>(trace: &AbpTrace<D>) -> Result<(), TraceError> {
    for (index, r) in trace.rounds.iter().enumerate() {
        let malformed = |reason: &str| TraceError::Malformed {
            round: r.round,
            reason: reason.to_string(),
        };
        if r.round != index + 1 {
            return Err(malformed("rounds are not numbered consecutively from 1"));
        }
        if r.dr.is_some() && r.ds.is_none() {
            return Err(malformed("packet received without one being sent"));
        }
        if r.as_.is_some() && r.ar.is_none() {
            return Err(malformed("acknowledgment received without one being sent"));
        }
    }
    Ok(())
}

fn is_prefix<M: Message + PartialEq>(a: &[M], b: &[M]) -> bool {
    // both are finite, so the budget only has to cover the longer one
    let budget = EvalBudget::new(a.len().max(b.len()) + 1).expect("non-zero budget");
    prefix_le(&Stream::from_vec(a.to_vec()), &Stream::from_vec(b.to_vec()), budget).is_yes()
}

/// Sender packets that differ from the previous emission, with their rounds.
fn fresh_packets<D: Clone + PartialEq>(trace: &AbpTrace<D>) -> Vec<(usize, DataPacket<D>)> {
    let mut fresh: Vec<(usize, DataPacket<D>)> = Vec::new();
    let mut last: Option<&DataPacket<D>> = None;
    for r in &trace.rounds {
        if let Some(p) = &r.ds {
            if last != Some(p) {
                fresh.push((r.round, p.clone()));
            }
            last = Some(p);
        }
    }
    fresh
}

/// The five sender conjuncts, adapted to finite traces:
///
/// 1. `in_order`: with repetitions removed, the sent data are a prefix of the input.
/// 2. `initial_bit`: some initial bit starts the packets, and the sender moves
///    to a new packet only after receiving the acknowledgment it waits for.
/// 3. `fresh_bit`: every new packet carries the opposite bit of the previous one.
/// 4. `eventual_progress`: a correct acknowledgment with input remaining is
///    followed by a packet with the next datum.
/// 5. `persistent_retransmission`: a packet never acknowledged is sent in
///    every round from its first transmission to the end of the trace.
pub fn sender_spec_check<D: Message + PartialEq>(trace: &AbpTrace<D>) -> Result<SpecReport, TraceError> {
    well_formed(trace)?;
    let input = trace.i();
    let ds = Stream::from_vec(trace.ds());
    let sent: Vec<D> = ds.remove_stutter().map(|p| p.payload).to_vec();
    let fresh = fresh_packets(trace);
    let last_round = trace.rounds.last().map_or(0, |r| r.round);
    let mut checks = Vec::with_capacity(5);

    checks.push(Check::new(
        "in_order",
        is_prefix(&sent, input),
        if is_prefix(&sent, input) {
            String::new()
        } else {
            format!("{} distinct packets are not a prefix of the input", sent.len())
        },
    ));

    let mut waited = Ok(());
    for pair in fresh.windows(2) {
        let ((from, prev), (to, _)) = (&pair[0], &pair[1]);
        let acked = trace.rounds[*from - 1..*to - 1].iter().any(|r| r.as_ == Some(prev.bit));
        if !acked {
            waited = Err(format!(
                "round {to} moved on without acknowledgment {} after round {from}",
                prev.bit
            ));
            break;
        }
    }
    let initial = fresh.first().map(|(_, p)| p.bit);
    checks.push(Check::new(
        "initial_bit",
        waited.is_ok(),
        waited
            .err()
            .unwrap_or_else(|| initial.map(|b| format!("b0 = {b}")).unwrap_or_default()),
    ));

    let clash = fresh.windows(2).find(|pair| pair[0].1.bit == pair[1].1.bit);
    checks.push(Check::new(
        "fresh_bit",
        clash.is_none(),
        clash
            .map(|pair| format!("rounds {} and {} start packets with the same bit", pair[0].0, pair[1].0))
            .unwrap_or_default(),
    ));

    let mut progress = Ok(());
    if !input.is_empty() && last_round > 0 && fresh.is_empty() {
        progress = Err("the first datum was never sent".to_string());
    }
    let mut current = 0usize;
    for r in &trace.rounds {
        while current + 1 < fresh.len() && fresh[current + 1].0 <= r.round {
            current += 1;
        }
        let Some((_, packet)) = fresh.get(current) else { break };
        let correct = r.as_ == Some(packet.bit) && fresh[current].0 <= r.round;
        if !correct || current + 1 >= input.len() || r.round == last_round {
            continue;
        }
        let next_ok = fresh
            .get(current + 1)
            .is_some_and(|(round, p)| *round > r.round && p.payload == input[current + 1]);
        if !next_ok {
            progress = Err(format!(
                "acknowledged in round {} but datum {} never followed",
                r.round,
                current + 1
            ));
            break;
        }
    }
    checks.push(Check::new(
        "eventual_progress",
        progress.is_ok(),
        progress.err().unwrap_or_default(),
    ));

    let mut persistence = Ok(());
    if let Some((first, packet)) = fresh.last() {
        let acked = trace.rounds[*first - 1..].iter().any(|r| r.as_ == Some(packet.bit));
        if !acked {
            if let Some(r) = trace.rounds[*first - 1..]
                .iter()
                .find(|r| r.ds.as_ref() != Some(packet))
            {
                persistence = Err(format!("unacknowledged packet not sent in round {}", r.round));
            }
        }
    }
    checks.push(Check::new(
        "persistent_retransmission",
        persistence.is_ok(),
        persistence.err().unwrap_or_default(),
    ));

    Ok(SpecReport { checks })
}

/// The two receiver conjuncts:
///
/// 1. `ack_every_packet`: the acknowledgments are the bits of the received packets.
/// 2. `deliver_without_repetition`: the output is the received payloads with
///    runs of equal bits collapsed.
pub fn receiver_spec_check<D: Message + PartialEq>(trace: &AbpTrace<D>) -> Result<SpecReport, TraceError> {
    well_formed(trace)?;
    let dr = Stream::from_vec(trace.dr());
    let bits = dr.map(|p| p.bit).to_vec();
    let acks_ok = trace.ar() == bits;

    let mut collapsed = Vec::new();
    let mut last_bit = None;
    for p in dr.iter() {
        if last_bit != Some(p.bit) {
            last_bit = Some(p.bit);
            collapsed.push(p.payload);
        }
    }
    let delivery_ok = trace.o() == collapsed;

    Ok(SpecReport {
        checks: vec![
            Check::new(
                "ack_every_packet",
                acks_ok,
                if acks_ok {
                    String::new()
                } else {
                    format!("{} acknowledgments for {} packets", trace.ar().len(), bits.len())
                },
            ),
            Check::new(
                "deliver_without_repetition",
                delivery_ok,
                if delivery_ok {
                    String::new()
                } else {
                    mismatch(&trace.o(), &collapsed)
                },
            ),
        ],
    })
}

fn mismatch<D: PartialEq>(actual: &[D], expected: &[D]) -> String {
    match actual.iter().zip(expected).position(|(a, e)| a != e) {
        Some(k) => format!("delivery {k} differs from the received packet"),
        None => format!("delivered {} data, expected {}", actual.len(), expected.len()),
    }
}

/// Safe transmission: the output is a prefix of the input, and equal to it
/// when the run completed.
pub fn overall_check<D: Message + PartialEq>(trace: &AbpTrace<D>) -> Check {
    let o = trace.o();
    let prefix = is_prefix(&o, trace.i());
    let passed = prefix && (!trace.completed || o.len() == trace.i().len());
    let detail = if !prefix {
        "output is not a prefix of the input".to_string()
    } else if !passed {
        format!("completed run delivered {} of {} data", o.len(), trace.i().len())
    } else {
        String::new()
    };
    Check::new("overall", passed, detail)
}

/// Every check: sender, receiver, both media and the composed system.
pub fn check_trace<D: Message + PartialEq>(trace: &AbpTrace<D>) -> Result<SpecReport, TraceError> {
    let mut report = sender_spec_check(trace)?;
    report.checks.extend(receiver_spec_check(trace)?.checks);
    let data_ok = medium_relation_check(&trace.ds(), &trace.dr()).is_some();
    report.checks.push(Check::new(
        "data_medium",
        data_ok,
        if data_ok {
            ""
        } else {
            "received packets are not a subsequence of sent ones"
        },
    ));
    let ack_ok = medium_relation_check(&trace.ar(), &trace.as_()).is_some();
    report.checks.push(Check::new(
        "ack_medium",
        ack_ok,
        if ack_ok {
            ""
        } else {
            "received acknowledgments are not a subsequence of sent ones"
        },
    ));
    report.checks.push(overall_check(trace));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abp::{simulate_abp, OracleStream};

    fn trace(input: &[u32], seed: u64) -> AbpTrace<u32> {
        simulate_abp(
            input,
            seed.is_multiple_of(2),
            &OracleStream::seeded(seed, 0.5).unwrap(),
            &OracleStream::seeded(seed + 1, 0.5).unwrap(),
            10_000,
        )
    }

    #[test]
    fn simulated_traces_pass_everything() {
        for seed in 0..20 {
            let t = trace(&[1, 2, 2, 3, 1], seed);
            let report = check_trace(&t).unwrap();
            assert!(
                report.passed(),
                "seed {seed}: {:?}",
                report.failures().collect::<Vec<_>>()
            );
            assert_eq!(report.checks.len(), 10);
        }
    }

    #[test]
    fn reordered_ds_breaks_order() {
        let mut t = simulate_abp(&[1, 2], false, &OracleStream::all_true(), &OracleStream::all_true(), 10);
        let (a, b) = (t.rounds[0].ds.clone(), t.rounds[1].ds.clone());
        t.rounds[0].ds = b;
        t.rounds[1].ds = a;
        let report = sender_spec_check(&t).unwrap();
        assert!(!report.get("in_order").unwrap().passed);
    }

    #[test]
    fn shared_bit_breaks_fresh_bit() {
        let mut t = simulate_abp(&[1, 2], false, &OracleStream::all_true(), &OracleStream::all_true(), 10);
        t.rounds[1].ds.as_mut().unwrap().bit = false;
        let report = sender_spec_check(&t).unwrap();
        assert!(!report.get("fresh_bit").unwrap().passed);
    }

    #[test]
    fn advancing_without_ack_breaks_initial_bit() {
        let mut t = simulate_abp(&[1, 2], true, &OracleStream::all_true(), &OracleStream::all_true(), 10);
        t.rounds[0].as_ = None;
        let report = sender_spec_check(&t).unwrap();
        assert!(!report.get("initial_bit").unwrap().passed);
    }

    #[test]
    fn stopping_early_breaks_liveness_conjuncts() {
        let never = OracleStream::cyclic(vec![], vec![false]).unwrap();
        let mut t = simulate_abp(&[1], false, &never, &OracleStream::all_true(), 5);
        t.rounds[3].ds = None;
        let report = sender_spec_check(&t).unwrap();
        assert!(!report.get("persistent_retransmission").unwrap().passed);

        let mut t = simulate_abp(
            &[1, 2, 3],
            false,
            &OracleStream::all_true(),
            &OracleStream::all_true(),
            10,
        );
        t.rounds.truncate(2);
        t.rounds[1].ds = Some(DataPacket { payload: 1, bit: false });
        t.rounds[1].ar = None;
        t.rounds[1].as_ = None;
        t.rounds[1].ar = None;
        t.rounds[1].o = None;
        t.completed = false;
        let report = sender_spec_check(&t).unwrap();
        assert!(!report.get("eventual_progress").unwrap().passed);
    }

    #[test]
    fn receiver_mutations() {
        let t = simulate_abp(
            &[1, 2, 3],
            false,
            &OracleStream::all_true(),
            &OracleStream::all_true(),
            10,
        );
        let mut missing_ack = t.clone();
        missing_ack.rounds[1].ar = None;
        missing_ack.rounds[1].as_ = None;
        let report = receiver_spec_check(&missing_ack).unwrap();
        assert!(!report.get("ack_every_packet").unwrap().passed);

        let lossy = OracleStream::cyclic(vec![false], vec![true]).unwrap();
        let mut dup = simulate_abp(&[1, 2], false, &OracleStream::all_true(), &lossy, 10);
        let repeat = dup.rounds.iter().position(|r| r.dr.is_some() && r.o.is_none()).unwrap();
        dup.rounds[repeat].o = Some(1);
        let report = receiver_spec_check(&dup).unwrap();
        assert!(!report.get("deliver_without_repetition").unwrap().passed);
    }

    #[test]
    fn overall_examples() {
        let t = trace(&[4, 3, 2, 1, 0], 9);
        assert!(t.completed);
        assert_eq!(t.o(), t.i());
        assert!(overall_check(&t).passed);

        let never = OracleStream::cyclic(vec![true], vec![false]).unwrap();
        let truncated = simulate_abp(&[1, 2, 3], false, &OracleStream::all_true(), &never, 50);
        assert!(!truncated.completed);
        assert_eq!(truncated.o(), vec![1, 2]);
        assert!(overall_check(&truncated).passed);

        let mut foreign = t.clone();
        let r = foreign.rounds.iter().position(|r| r.o.is_some()).unwrap();
        foreign.rounds[r].o = Some(99);
        assert!(!overall_check(&foreign).passed);
    }

    #[test]
    fn malformed_traces_are_rejected() {
        let mut t = simulate_abp(&[1], false, &OracleStream::all_true(), &OracleStream::all_true(), 10);
        t.rounds[0].ar = None;
        assert!(matches!(check_trace(&t), Err(TraceError::Malformed { round: 1, .. })));
        let mut t = simulate_abp(&[1], false, &OracleStream::all_true(), &OracleStream::all_true(), 10);
        t.rounds[0].round = 2;
        assert!(check_trace(&t).is_err());
    }
}
