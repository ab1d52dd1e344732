//! Bisimulation checking for finite I/O*-automata.
//!
//! Related states must answer every input with the same output sequence and
//! move to related states. Outputs are compared as whole per-step sequences.
//! The greatest bisimulation over reachable state pairs is found by removing
//! pairs that violate this condition until nothing changes.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{AutomatonError, Ioa, Symbol};

/// Why two automata are not bisimilar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distinction<Sa, Sb, I> {
    /// The start pair that could not be related.
    pub pair: (Sa, Sb),
    /// The input on which the pair's reactions differ; `None` when the
    /// initial outputs already differ.
    pub input: Option<I>,
    /// An input word from `pair` after whose last letter the two automata
    /// emit different output. Empty when the initial outputs differ.
    pub word: Vec<I>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bisimulation<Sa, Sb, I> {
    /// Related state pairs reachable from the start pairs.
    Bisimilar {
        relation: BTreeSet<(Sa, Sb)>,
    },
    Distinguished(Distinction<Sa, Sb, I>),
}

impl<Sa, Sb, I> Bisimulation<Sa, Sb, I> {
    pub fn holds(&self) -> bool {
        matches!(self, Bisimulation::Bisimilar { .. })
    }
}

/// Why a pair was dropped from the candidate relation: the input, and the
/// successor pair when outputs matched but successors were unrelated.
type Reason<Sa, Sb, I> = (I, Option<(Sa, Sb)>);

fn reachable<S: Symbol, I: Symbol, O: Symbol>(a: &Ioa<S, I, O>) -> BTreeSet<S> {
    let mut seen: BTreeSet<S> = a.init.iter().map(|e| e.state.clone()).collect();
    let mut queue: VecDeque<S> = seen.iter().cloned().collect();
    while let Some(s) = queue.pop_front() {
        for t in a.transitions.iter().filter(|t| t.src == s) {
            if seen.insert(t.dst.clone()) {
                queue.push_back(t.dst.clone());
            }
        }
    }
    seen
}

/// Outgoing transitions of each state, grouped by input: `state -> input -> [(output, dst)]`.
type Moves<S, I, O> = BTreeMap<S, BTreeMap<I, Vec<(Vec<O>, S)>>>;

fn moves<S: Symbol, I: Symbol, O: Symbol>(a: &Ioa<S, I, O>) -> Moves<S, I, O> {
    let mut m: Moves<S, I, O> = BTreeMap::new();
    for t in &a.transitions {
        m.entry(t.src.clone())
            .or_default()
            .entry(t.input.clone())
            .or_default()
            .push((t.output.clone(), t.dst.clone()));
    }
    m
}

/// Checks whether every move of one side is matched by some move of the
/// other side into a related pair. Returns the first unmatched reason.
fn unmatched<Sp: Symbol, Sq: Symbol, O: Symbol>(
    p_moves: &[(Vec<O>, Sp)],
    q_moves: &[(Vec<O>, Sq)],
    related: impl Fn(&Sp, &Sq) -> bool,
) -> Option<Option<(Sp, Sq)>> {
    for (out, p_dst) in p_moves {
        let same_output: Vec<&Sq> = q_moves.iter().filter(|(o, _)| o == out).map(|(_, q)| q).collect();
        if same_output.is_empty() {
            return Some(None);
        }
        if !same_output.iter().any(|q_dst| related(p_dst, q_dst)) {
            return Some(Some((p_dst.clone(), same_output[0].clone())));
        }
    }
    None
}

/// Decides whether `a` and `b` are bisimilar.
pub fn bisimilar<Sa, Sb, I, O>(
    a: &Ioa<Sa, I, O>,
    b: &Ioa<Sb, I, O>,
) -> Result<Bisimulation<Sa, Sb, I>, AutomatonError<Sa, I>>
where
    Sa: Symbol,
    Sb: Symbol,
    I: Symbol,
    O: Symbol,
{
    if a.inputs != b.inputs {
        return Err(AutomatonError::AlphabetMismatch);
    }
    if a.init.is_empty() || b.init.is_empty() {
        return Err(AutomatonError::NotWellDefined);
    }
    let (moves_a, moves_b) = (moves(a), moves(b));
    let none = Vec::new();
    let step_a = |s: &Sa, x: &I| moves_a.get(s).and_then(|m| m.get(x)).unwrap_or(&none);
    let none_b = Vec::new();
    let step_b = |s: &Sb, x: &I| moves_b.get(s).and_then(|m| m.get(x)).unwrap_or(&none_b);

    let reach_b = reachable(b);
    let mut relation: BTreeSet<(Sa, Sb)> = reachable(a)
        .into_iter()
        .flat_map(|p| reach_b.iter().map(move |q| (p.clone(), q.clone())))
        .collect();
    let mut reasons: BTreeMap<(Sa, Sb), Reason<Sa, Sb, I>> = BTreeMap::new();

    loop {
        let mut dropped = Vec::new();
        for (p, q) in &relation {
            for x in &a.inputs {
                let (pm, qm) = (step_a(p, x), step_b(q, x));
                let forward = unmatched(pm, qm, |p2, q2| relation.contains(&(p2.clone(), q2.clone())));
                let backward = || {
                    unmatched(qm, pm, |q2, p2| relation.contains(&(p2.clone(), q2.clone())))
                        .map(|next| next.map(|(q2, p2)| (p2, q2)))
                };
                if let Some(next) = forward.or_else(backward) {
                    dropped.push(((p.clone(), q.clone()), (x.clone(), next)));
                    break;
                }
            }
        }
        if dropped.is_empty() {
            break;
        }
        for (pair, reason) in dropped {
            relation.remove(&pair);
            reasons.insert(pair, reason);
        }
    }

    // every start entry on either side needs a related partner with equal initial output
    let distinction = |pa: &Sa, pb: &Sb, same_output: bool| {
        if !same_output {
            return Distinction {
                pair: (pa.clone(), pb.clone()),
                input: None,
                word: Vec::new(),
            };
        }
        let mut word = Vec::new();
        let mut cursor = (pa.clone(), pb.clone());
        let first = reasons.get(&cursor).map(|(x, _)| x.clone());
        while let Some((x, next)) = reasons.get(&cursor) {
            word.push(x.clone());
            match next {
                Some(pair) => cursor = pair.clone(),
                None => break,
            }
        }
        Distinction {
            pair: (pa.clone(), pb.clone()),
            input: first,
            word,
        }
    };
    for ea in &a.init {
        let candidates: Vec<_> = b.init.iter().filter(|eb| eb.output == ea.output).collect();
        if !candidates
            .iter()
            .any(|eb| relation.contains(&(ea.state.clone(), eb.state.clone())))
        {
            let (pb, same) = match candidates.first() {
                Some(eb) => (&eb.state, true),
                None => (&b.init[0].state, false),
            };
            return Ok(Bisimulation::Distinguished(distinction(&ea.state, pb, same)));
        }
    }
    for eb in &b.init {
        let candidates: Vec<_> = a.init.iter().filter(|ea| ea.output == eb.output).collect();
        if !candidates
            .iter()
            .any(|ea| relation.contains(&(ea.state.clone(), eb.state.clone())))
        {
            let (pa, same) = match candidates.first() {
                Some(ea) => (&ea.state, true),
                None => (&a.init[0].state, false),
            };
            return Ok(Bisimulation::Distinguished(distinction(pa, &eb.state, same)));
        }
    }

    // keep only the pairs reachable from related start pairs along matched moves
    let mut kept = BTreeSet::new();
    let mut queue: VecDeque<(Sa, Sb)> = a
        .init
        .iter()
        .flat_map(|ea| {
            b.init
                .iter()
                .filter(move |eb| eb.output == ea.output)
                .map(move |eb| (ea.state.clone(), eb.state.clone()))
        })
        .filter(|pair| relation.contains(pair))
        .collect();
    while let Some(pair) = queue.pop_front() {
        if !kept.insert(pair.clone()) {
            continue;
        }
        for x in &a.inputs {
            for (oa, pa) in step_a(&pair.0, x) {
                for (ob, pb) in step_b(&pair.1, x) {
                    let next = (pa.clone(), pb.clone());
                    if oa == ob && relation.contains(&next) && !kept.contains(&next) {
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    Ok(Bisimulation::Bisimilar { relation: kept })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{build_auction, InitEntry, Transition};

    fn echo() -> Ioa<u8, u8, u8> {
        Ioa::new(
            [0],
            [1, 2],
            [1, 2],
            vec![
                Transition {
                    src: 0,
                    input: 1,
                    dst: 0,
                    output: vec![1],
                },
                Transition {
                    src: 0,
                    input: 2,
                    dst: 0,
                    output: vec![2],
                },
            ],
            vec![InitEntry {
                state: 0,
                output: vec![],
            }],
        )
    }

    fn rename<I: Symbol, O: Symbol>(a: &Ioa<u8, I, O>) -> Ioa<String, I, O> {
        let name = |s: &u8| format!("q{s}");
        Ioa::new(
            a.states.iter().map(name),
            a.inputs.iter().cloned(),
            a.outputs.iter().cloned(),
            a.transitions
                .iter()
                .map(|t| Transition {
                    src: name(&t.src),
                    input: t.input.clone(),
                    dst: name(&t.dst),
                    output: t.output.clone(),
                })
                .collect(),
            a.init
                .iter()
                .map(|e| InitEntry {
                    state: name(&e.state),
                    output: e.output.clone(),
                })
                .collect(),
        )
    }

    /// Three states in a cycle on input 0, emitting which state was left.
    fn ring() -> Ioa<u8, u8, u8> {
        Ioa::new(
            [0, 1, 2],
            [0],
            [0, 1, 2],
            (0..3)
                .map(|s| Transition {
                    src: s,
                    input: 0,
                    dst: (s + 1) % 3,
                    output: vec![s],
                })
                .collect(),
            vec![InitEntry {
                state: 0,
                output: vec![],
            }],
        )
    }

    #[test]
    fn renamed_machine_is_bisimilar_via_renaming() {
        let result = bisimilar(&ring(), &rename(&ring())).unwrap();
        let expected: BTreeSet<_> = (0..3u8).map(|s| (s, format!("q{s}"))).collect();
        assert_eq!(result, Bisimulation::Bisimilar { relation: expected });
    }

    #[test]
    fn echo_differs_from_double_echo_at_start() {
        let mut double = echo();
        for t in &mut double.transitions {
            t.output = vec![t.input, t.input];
        }
        match bisimilar(&echo(), &double).unwrap() {
            Bisimulation::Distinguished(d) => {
                assert_eq!(d.pair, (0, 0));
                assert_eq!(d.input, Some(1));
                assert_eq!(d.word, vec![1]);
            }
            other => panic!("expected a distinction, got {other:?}"),
        }
    }

    #[test]
    fn duplicated_state_collapses() {
        // two copies of the echo state that alternate; both behave like echo
        let two = Ioa::new(
            [0u8, 1],
            [1u8, 2],
            [1u8, 2],
            vec![
                Transition {
                    src: 0,
                    input: 1,
                    dst: 1,
                    output: vec![1],
                },
                Transition {
                    src: 0,
                    input: 2,
                    dst: 1,
                    output: vec![2],
                },
                Transition {
                    src: 1,
                    input: 1,
                    dst: 0,
                    output: vec![1],
                },
                Transition {
                    src: 1,
                    input: 2,
                    dst: 0,
                    output: vec![2],
                },
            ],
            vec![InitEntry {
                state: 0,
                output: vec![],
            }],
        );
        let result = bisimilar(&two, &echo()).unwrap();
        assert_eq!(
            result,
            Bisimulation::Bisimilar {
                relation: BTreeSet::from([(0, 0), (1, 0)])
            }
        );
    }

    #[test]
    fn late_difference_yields_full_word() {
        let mut mutated = ring();
        mutated.transitions[2].output = vec![0];
        match bisimilar(&ring(), &mutated).unwrap() {
            Bisimulation::Distinguished(d) => assert_eq!(d.word, vec![0, 0, 0]),
            other => panic!("expected a distinction, got {other:?}"),
        }
    }

    #[test]
    fn initial_output_difference() {
        let mut loud = echo();
        loud.init[0].output = vec![1];
        match bisimilar(&echo(), &loud).unwrap() {
            Bisimulation::Distinguished(d) => {
                assert_eq!(d.input, None);
                assert!(d.word.is_empty());
            }
            other => panic!("expected a distinction, got {other:?}"),
        }
    }

    #[test]
    fn alphabets_must_agree() {
        assert_eq!(bisimilar(&echo(), &ring()), Err(AutomatonError::AlphabetMismatch));
    }

    #[test]
    fn equivalence_properties_on_auctions() {
        let a = build_auction(3, &['A', 'B']).unwrap();
        let b = build_auction(3, &['A', 'B']).unwrap();
        assert!(bisimilar(&a, &a).unwrap().holds());
        assert!(bisimilar(&a, &b).unwrap().holds());
        let c = build_auction(2, &['A', 'B']).unwrap();
        assert!(!bisimilar(&a, &c).unwrap().holds());
        assert!(!bisimilar(&c, &a).unwrap().holds());
    }
}
