//! Lazy finite and infinite streams, and budgeted queries over them.

use streamproc::stream::{bounded_eq, prefix_le, EvalBudget, Stream};

fn main() {
    let naturals = Stream::from_fn(|n| n as u64);
    let evens = naturals.filter(|n| n % 2 == 0);
    println!("first evens: {:?}", evens.prefix(5));

    let squares = naturals.map(|n| n * n).skip(3).take(4);
    println!("squares 3..7: {:?}", squares.to_vec());

    let pattern = Stream::from(['a', 'b', 'c']).cycle().expect("non-empty base");
    println!("cycled: {}", pattern.prefix(8).iter().collect::<String>());

    let k = EvalBudget::new(100).unwrap();
    println!("len <1,2,3> = {:?}", Stream::from_vec(vec![1, 2, 3]).len_within(k));
    println!("len naturals = {:?}", naturals.len_within(k));

    // (abc)^∞ and a(bca)^∞ are the same stream
    let shifted = Stream::single('a').concat(&Stream::from(['b', 'c', 'a']).cycle().unwrap());
    println!("(abc)^inf vs a(bca)^inf: {:?}", bounded_eq(&pattern, &shifted, k));

    let short = Stream::from_vec(vec![0u64, 1, 2]);
    println!("<0,1,2> prefix of naturals: {:?}", prefix_le(&short, &naturals, k));
    println!("naturals prefix of <0,1,2>: {:?}", prefix_le(&naturals, &short, k));

    let stutter = Stream::from_vec(vec![1, 1, 2, 2, 2, 1, 3, 3]);
    println!("without stutter: {:?}", stutter.remove_stutter().to_vec());
}
