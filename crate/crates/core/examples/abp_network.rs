//! The protocol as a feedback network of stream processing components,
//! solved by fixpoint iteration and compared with the round simulator.

use streamproc::abp::network::{delivered, solve};
use streamproc::abp::{simulate_abp, OracleStream};

fn main() {
    let run = solve(&["d1"], false, OracleStream::all_true(), OracleStream::all_true(), 50).unwrap();
    println!(
        "<d1> over perfect media: {:?} after {} rounds -> {:?}",
        run.status,
        run.rounds,
        delivered(&run)
    );
    for (name, content) in &run.channels {
        println!("  {name}: {content:?}");
    }

    let input = [10, 20, 30];
    let data = OracleStream::seeded(5, 0.5).unwrap();
    let ack = OracleStream::seeded(6, 0.5).unwrap();
    let trace = simulate_abp(&input, true, &data, &ack, 1000);
    let run = solve(&input, true, data, ack, 10_000).unwrap();
    println!(
        "lossy media: network delivers {:?} after {} iterations, simulator {:?} after {} protocol rounds",
        delivered(&run),
        run.rounds,
        trace.o(),
        trace.rounds_used()
    );

    let never = OracleStream::cyclic(vec![], vec![false]).unwrap();
    let run = solve(&[1], false, never, OracleStream::all_true(), 40).unwrap();
    println!(
        "medium that loses everything: {:?}, delivered {:?}",
        run.status,
        delivered(&run)
    );
}
