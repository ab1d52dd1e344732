use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

/// A natural number extended with infinity. Used as the length domain of streams.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtNat {
    Fin(u64),
    Inf,
}

impl ExtNat {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Fin(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Fin(n) => Some(n),
            ExtNat::Inf => None,
        }
    }
}

impl From<u64> for ExtNat {
    fn from(n: u64) -> Self {
        ExtNat::Fin(n)
    }
}

impl From<usize> for ExtNat {
    fn from(n: usize) -> Self {
        ExtNat::Fin(n as u64)
    }
}

impl Ord for ExtNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => a.cmp(b),
            (ExtNat::Fin(_), ExtNat::Inf) => Ordering::Less,
            (ExtNat::Inf, ExtNat::Fin(_)) => Ordering::Greater,
            (ExtNat::Inf, ExtNat::Inf) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            // saturating: u64 overflow is treated as unreachable rather than wrapping
            (ExtNat::Fin(a), ExtNat::Fin(b)) => ExtNat::Fin(a.saturating_add(b)),
            _ => ExtNat::Inf,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(n) => write!(f, "{n}"),
            ExtNat::Inf => f.write_str("∞"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn infinity_dominates() {
        assert!(ExtNat::Inf > ExtNat::Fin(u64::MAX));
        assert_eq!(ExtNat::Inf + ExtNat::Fin(3), ExtNat::Inf);
        assert_eq!(ExtNat::Fin(3) + ExtNat::Inf, ExtNat::Inf);
        assert_eq!(ExtNat::Fin(2) + ExtNat::Fin(3), ExtNat::Fin(5));
        assert_eq!(ExtNat::Inf.to_string(), "∞");
    }

    proptest! {
        #[test]
        fn order_agrees_with_naturals(a in any::<u64>(), b in any::<u64>()) {
            prop_assert_eq!(ExtNat::Fin(a).cmp(&ExtNat::Fin(b)), a.cmp(&b));
            prop_assert!(ExtNat::Fin(a) < ExtNat::Inf);
        }
    }
}
