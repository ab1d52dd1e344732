//! Stream processing functions: lifting, monotonicity checks and a
//! feedback network solved by fixpoint iteration.

use std::collections::BTreeMap;

use streamproc::spf::{check_approximation, check_monotone, fixpoint_solve, NetworkConfig, Spf};
use streamproc::stream::{EvalBudget, Stream};

fn main() {
    let k = EvalBudget::new(100).unwrap();
    let doubled_odds = Spf::lift_elementwise(|x: i64| if x % 2 != 0 { vec![x, x] } else { vec![] });
    println!(
        "apply: {:?}",
        doubled_odds.apply(&Stream::from_vec(vec![1, 2, 3])).to_vec()
    );

    let samples = vec![(vec![1], vec![1, 2]), (vec![], vec![5]), (vec![3, 4], vec![3, 4, 5])];
    println!("monotone: {}", check_monotone(&doubled_odds, &samples, k).passed());
    let approx = check_approximation(&doubled_odds, &[1, 2, 3, 4, 5], k);
    println!("approximation chain: {:?}", approx.chain);

    // counts parity: <0> on even-length input, <> otherwise; not monotone
    let parity = Spf::from_fn(|s: &Stream<i64>| {
        if s.to_vec().len().is_multiple_of(2) {
            Stream::single(0)
        } else {
            Stream::empty()
        }
    });
    let report = check_monotone(&parity, &[(vec![], vec![7])], k);
    println!("parity monotone: {} ({:?})", report.passed(), report.violations);

    // s = x + (<0> ⌢ s), the running sums of x
    let config: NetworkConfig = serde_json::from_str(
        r#"{
            "inputs": ["x"],
            "outputs": ["sums"],
            "components": [
                {"name": "add", "kind": "zip_add"},
                {"name": "delay", "kind": "prepend", "values": [0]}
            ],
            "wires": [
                {"from": "x", "to": "add:0"},
                {"from": "delay:0", "to": "add:1"},
                {"from": "add:0", "to": "delay:0"},
                {"from": "add:0", "to": "sums"}
            ]
        }"#,
    )
    .expect("valid network description");
    let net = config.build().expect("well-wired network");
    let inputs = BTreeMap::from([("x".to_string(), vec![1, 2, 3, 4])]);
    let run = fixpoint_solve(&net, &inputs, 20, k).expect("bounded components");
    println!(
        "{:?} after {} rounds: sums = {:?}",
        run.status,
        run.rounds,
        run.output("sums").unwrap()
    );
    for (round, channels) in run.history.iter().enumerate() {
        println!("  round {}: add:0 = {:?}", round + 1, channels["add:0"]);
    }
}
