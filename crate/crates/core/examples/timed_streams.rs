//! Timed streams: frames separated by ticks, time abstraction and synchrony.

use streamproc::stream::{EvalBudget, Stream};
use streamproc::timed::{TimedMsg, TimedStream};

fn main() {
    use TimedMsg::{Msg, Tick};
    let k = EvalBudget::new(200).unwrap();

    let recorded = TimedStream::from_vec(vec![Msg("a"), Msg("b"), Tick, Tick, Msg("c"), Tick]);
    println!("frames: {:?}", recorded.frames(3, k).unwrap());
    println!("untimed: {:?}", recorded.time_abs().to_vec());
    println!("first two frames: {:?}", recorded.take_frames(2).as_stream().to_vec());
    println!("synchronous: {}", recorded.is_time_synchronous(3, k).unwrap());

    let heartbeat = TimedStream::cycle(vec![Msg(1), Tick]).unwrap();
    println!("heartbeat has 50 ticks: {:?}", heartbeat.time_complete_within(k, 50));
    println!(
        "heartbeat synchronous over 20 frames: {}",
        heartbeat.is_time_synchronous(20, k).unwrap()
    );

    let clocked = TimedStream::synchronous(&Stream::from_fn(|n| n));
    println!("clocked frames: {:?}", clocked.frames(4, k).unwrap());

    match recorded.frames(5, k) {
        Ok(f) => println!("unexpected frames {f:?}"),
        Err(e) => println!("asking for 5 frames: {e}"),
    }
}
