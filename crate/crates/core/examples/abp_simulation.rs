//! The Alternating Bit Protocol over two lossy media, with the recorded
//! trace checked against the sender, receiver, medium and system specifications.

use streamproc::abp::{check_trace, render_bits, simulate_abp, OracleStream};

fn main() {
    let input = ['h', 'e', 'l', 'l', 'o'];
    let data_oracle = OracleStream::seeded(2024, 0.6).unwrap();
    let ack_oracle = OracleStream::seeded(7, 0.7).unwrap();
    println!("data medium oracle: {}", render_bits(&data_oracle.prefix(20)));
    println!("ack medium oracle:  {}", render_bits(&ack_oracle.prefix(20)));

    let trace = simulate_abp(&input, false, &data_oracle, &ack_oracle, 1000);
    println!("{:>5}  {:<8} {:<8} {:<5} {:<5} o", "round", "ds", "dr", "ar", "as");
    let packet = |p: &Option<streamproc::abp::DataPacket<char>>| {
        p.as_ref()
            .map_or("-".to_string(), |p| format!("({},{})", p.payload, u8::from(p.bit)))
    };
    let bit = |b: Option<bool>| b.map_or("-".to_string(), |b| u8::from(b).to_string());
    for r in &trace.rounds {
        println!(
            "{:>5}  {:<8} {:<8} {:<5} {:<5} {}",
            r.round,
            packet(&r.ds),
            packet(&r.dr),
            bit(r.ar),
            bit(r.as_),
            r.o.map_or("-".to_string(), String::from)
        );
    }
    println!(
        "delivered {:?} in {} rounds ({} data and {} ack losses)",
        trace.o().iter().collect::<String>(),
        trace.rounds_used(),
        trace.data_drops(),
        trace.ack_drops()
    );

    let report = check_trace(&trace).expect("simulator traces are well formed");
    for check in &report.checks {
        println!("{check}");
    }
}
