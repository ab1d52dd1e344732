use super::{AbpTrace, OracleStream, Receiver, RoundRecord, Sender};

/// Runs the protocol round by round until all input is acknowledged or
/// `max_rounds` rounds have passed.
///
/// In each round the sender emits one packet (a retransmission while the
/// previous one is unacknowledged). The `k`-th packet crosses the data medium
/// iff bit `k` of `data_oracle` is set; the receiver answers every packet it
/// gets, and the `k`-th acknowledgment crosses the ack medium iff bit `k` of
/// `ack_oracle` is set.
pub fn simulate_abp<D: Clone>(
    input: &[D],
    initial_bit: bool,
    data_oracle: &OracleStream,
    ack_oracle: &OracleStream,
    max_rounds: usize,
) -> AbpTrace<D> {
    let mut sender = Sender::new(initial_bit);
    sender.enqueue(input.iter().cloned());
    let mut receiver = Receiver::new();
    let (mut packets_sent, mut acks_sent) = (0usize, 0usize);
    let mut rounds = Vec::new();

    while rounds.len() < max_rounds && !sender.is_done() {
        let mut record = RoundRecord {
            round: rounds.len() + 1,
            ds: None,
            dr: None,
            ar: None,
            as_: None,
            o: None,
        };
        if let Some(packet) = sender.emit() {
            record.ds = Some(packet.clone());
            let crosses = data_oracle.bit(packets_sent);
            packets_sent += 1;
            if crosses {
                record.dr = Some(packet.clone());
                let (ack, delivered) = receiver.receive(packet);
                record.ar = Some(ack);
                record.o = delivered;
                let crosses = ack_oracle.bit(acks_sent);
                acks_sent += 1;
                if crosses {
                    record.as_ = Some(ack);
                    sender.receive_ack(ack);
                }
            }
        }
        rounds.push(record);
    }

    AbpTrace {
        input: input.to_vec(),
        initial_bit,
        rounds,
        completed: sender.is_done(),
        data_oracle: data_oracle.source().clone(),
        ack_oracle: ack_oracle.source().clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abp::DataPacket;

    #[test]
    fn single_datum_over_perfect_media() {
        let t = simulate_abp(&["d1"], false, &OracleStream::all_true(), &OracleStream::all_true(), 10);
        assert!(t.completed);
        assert_eq!(t.o(), vec!["d1"]);
        assert_eq!(
            t.ds(),
            vec![DataPacket {
                payload: "d1",
                bit: false
            }]
        );
        assert_eq!(t.as_(), vec![false]);
        assert_eq!(t.rounds_used(), 1);
    }

    #[test]
    fn first_transmission_lost() {
        let lossy = OracleStream::cyclic(vec![false], vec![true]).unwrap();
        let t = simulate_abp(&["d1"], true, &lossy, &OracleStream::all_true(), 10);
        assert_eq!(t.o(), vec!["d1"]);
        assert_eq!(t.ds().len(), 2);
        assert!(t.ds().iter().all(|p| p
            == &DataPacket {
                payload: "d1",
                bit: true
            }));
        assert_eq!(t.data_drops(), 1);
    }

    #[test]
    fn lost_ack_causes_duplicate_that_is_not_delivered() {
        let lossy = OracleStream::cyclic(vec![false], vec![true]).unwrap();
        let t = simulate_abp(&[1, 2], false, &OracleStream::all_true(), &lossy, 10);
        assert!(t.completed);
        assert_eq!(t.dr().len(), 3);
        assert_eq!(t.o(), vec![1, 2]);
        assert_eq!(t.ack_drops(), 1);
    }

    #[test]
    fn empty_input() {
        let t = simulate_abp::<u8>(&[], false, &OracleStream::all_true(), &OracleStream::all_true(), 10);
        assert!(t.completed);
        assert_eq!(t.rounds_used(), 0);
        assert!(t.ds().is_empty() && t.o().is_empty());
    }

    #[test]
    fn truncated_run_is_incomplete() {
        let never = OracleStream::cyclic(vec![], vec![false]).unwrap();
        let t = simulate_abp(&[1, 2, 3], false, &never, &OracleStream::all_true(), 25);
        assert!(!t.completed);
        assert_eq!(t.rounds_used(), 25);
        assert!(t.o().is_empty());
    }
}
