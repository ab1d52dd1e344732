//! Bisimilarity of I/O*-automata, with a distinguishing input word when it fails.

use streamproc::automata::{bisimilar, ioafp, Bisimulation, InitEntry, Ioa, Transition};
use streamproc::stream::Stream;

/// Emits `1` on every second `tick`.
fn halving(names: [&'static str; 2]) -> Ioa<&'static str, char, u8> {
    let [even, odd] = names;
    Ioa::new(
        names,
        ['t'],
        [1],
        vec![
            Transition {
                src: even,
                input: 't',
                dst: odd,
                output: vec![],
            },
            Transition {
                src: odd,
                input: 't',
                dst: even,
                output: vec![1],
            },
        ],
        vec![InitEntry {
            state: even,
            output: vec![],
        }],
    )
}

fn main() {
    let a = halving(["even", "odd"]);
    let b = halving(["p", "q"]);
    match bisimilar(&a, &b).expect("same alphabets") {
        Bisimulation::Bisimilar { relation } => println!("renamed copy is bisimilar via {relation:?}"),
        Bisimulation::Distinguished(d) => println!("unexpected difference: {d:?}"),
    }

    let ticks = Stream::from_vec(vec!['t'; 6]);
    let fa = ioafp(&a).unwrap().apply(&ticks).to_vec();
    let fb = ioafp(&b).unwrap().apply(&ticks).to_vec();
    println!("outputs on six ticks: {fa:?} and {fb:?}");

    let mut broken = halving(["p", "q"]);
    broken.transitions[1].output = vec![1, 1];
    match bisimilar(&a, &broken).unwrap() {
        Bisimulation::Distinguished(d) => {
            println!("mutation detected at {:?}, word {:?}", d.pair, d.word);
            let word = Stream::from_vec(d.word.clone());
            println!(
                "  outputs {:?} vs {:?}",
                ioafp(&a).unwrap().apply(&word).to_vec(),
                ioafp(&broken).unwrap().apply(&word).to_vec()
            );
        }
        Bisimulation::Bisimilar { .. } => println!("mutation went unnoticed"),
    }
}
