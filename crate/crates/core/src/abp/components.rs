use std::collections::VecDeque;

use super::DataPacket;

/// The sending side: tags each datum with an alternating bit and keeps
/// retransmitting it until the matching acknowledgment arrives.
#[derive(Clone, Debug)]
pub struct Sender<D> {
    queue: VecDeque<D>,
    bit: bool,
    in_flight: Option<DataPacket<D>>,
}

impl<D: Clone> Sender<D> {
    pub fn new(initial_bit: bool) -> Self {
        Sender {
            queue: VecDeque::new(),
            bit: initial_bit,
            in_flight: None,
        }
    }

    pub fn enqueue(&mut self, data: impl IntoIterator<Item = D>) {
        self.queue.extend(data);
    }

    /// The packet to put on the wire this round, if any data is pending.
    pub fn emit(&mut self) -> Option<DataPacket<D>> {
        if self.in_flight.is_none() {
            let payload = self.queue.front()?.clone();
            self.in_flight = Some(DataPacket { payload, bit: self.bit });
        }
        self.in_flight.clone()
    }

    /// An acknowledgment for the packet in flight moves on to the next datum
    /// with the opposite bit; any other acknowledgment is ignored.
    pub fn receive_ack(&mut self, ack: bool) {
        if self.in_flight.as_ref().is_some_and(|p| p.bit == ack) {
            self.in_flight = None;
            self.queue.pop_front();
            self.bit = !self.bit;
        }
    }

    /// The bit the sender is waiting to see acknowledged (or will attach next).
    pub fn current_bit(&self) -> bool {
        self.bit
    }

    /// All data sent and acknowledged.
    pub fn is_done(&self) -> bool {
        self.queue.is_empty() && self.in_flight.is_none()
    }
}

/// The receiving side: acknowledges every packet with its bit and delivers a
/// payload only when the bit differs from the last accepted one.
#[derive(Clone, Debug, Default)]
pub struct Receiver {
    last_bit: Option<bool>,
}

impl Receiver {
    pub fn new() -> Self {
        Receiver::default()
    }

    /// The acknowledgment to send and the payload to deliver, if new.
    pub fn receive<D>(&mut self, packet: DataPacket<D>) -> (bool, Option<D>) {
        let fresh = self.last_bit != Some(packet.bit);
        self.last_bit = Some(packet.bit);
        (packet.bit, fresh.then_some(packet.payload))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn packet(payload: &'static str, bit: bool) -> DataPacket<&'static str> {
        DataPacket { payload, bit }
    }

    #[test]
    fn sender_examples() {
        let mut s = Sender::new(false);
        s.enqueue(["d1", "d2"]);
        assert_eq!(s.emit(), Some(packet("d1", false)));
        // wrong-bit ack is ignored
        s.receive_ack(true);
        assert_eq!(s.emit(), Some(packet("d1", false)));
        s.receive_ack(false);
        assert_eq!(s.emit(), Some(packet("d2", true)));
        s.receive_ack(true);
        assert!(s.is_done());
        assert_eq!(s.emit(), None);
        assert!(!s.current_bit());
    }

    #[test]
    fn stale_ack_before_any_packet_is_ignored() {
        let mut s = Sender::new(true);
        s.receive_ack(true);
        s.enqueue(["d1"]);
        assert_eq!(s.emit(), Some(packet("d1", true)));
    }

    #[test]
    fn receiver_examples() {
        let mut r = Receiver::new();
        assert_eq!(r.receive(packet("d1", false)), (false, Some("d1")));
        assert_eq!(r.receive(packet("d1", false)), (false, None));
        assert_eq!(r.receive(packet("d2", true)), (true, Some("d2")));
    }
}
