//! A timed auction as an I/O*-automaton: bids arrive between ticks and the
//! last bidder wins once the countdown runs out.

use streamproc::automata::{build_auction, FirstChoice};
use streamproc::timed::TimedMsg::{Msg, Tick};

fn main() {
    for timeout in 1..=5 {
        let auction = build_auction(timeout, &["ann", "bob"]).expect("positive timeout");
        let report = auction.validate();
        println!(
            "timeout {timeout}: {} states, deterministic {}, complete {}",
            auction.states.len(),
            report.deterministic,
            report.complete
        );
    }

    let auction = build_auction(3, &["ann", "bob"]).unwrap();
    let input = [Msg("ann"), Tick, Msg("bob"), Tick, Tick, Msg("ann"), Tick];
    let run = auction.run(&input, &mut FirstChoice).expect("complete automaton");
    for (index, (letter, step)) in input.iter().zip(&run.steps).enumerate() {
        println!("{index}: {letter:?} -> {:?} emits {:?}", step.dst, step.output);
    }
    println!("winner: {:?}", run.output());
}
