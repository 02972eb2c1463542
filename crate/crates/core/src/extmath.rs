//! Extended cardinals: nonnegative integers plus a single infinite value.
//!
//! Nullity and deficiency of an operator live here. All infinite cardinals
//! collapse to [`ExtCard::Inf`]; every operator modeled by this crate acts on
//! a separable space, so one infinite value is enough.
//!
//! In the Hilbert-space model, embedding of one space into another reduces to
//! comparing orthogonal dimensions, which is what [`embeds`] and
//! [`essentially_embeds`] encode.

use std::fmt;
use std::iter::Sum;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A nonnegative integer or infinity.
///
/// The derived order places every finite value below `Inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtCard {
    Finite(u64),
    Inf,
}

pub use ExtCard::Inf as INF;

impl ExtCard {
    pub const ZERO: ExtCard = ExtCard::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, ExtCard::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        self == ExtCard::Inf
    }

    pub fn is_zero(self) -> bool {
        self == ExtCard::ZERO
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtCard::Finite(n) => Some(n),
            ExtCard::Inf => None,
        }
    }
}

impl From<u64> for ExtCard {
    fn from(n: u64) -> Self {
        ExtCard::Finite(n)
    }
}

impl From<usize> for ExtCard {
    fn from(n: usize) -> Self {
        ExtCard::Finite(n as u64)
    }
}

impl Add for ExtCard {
    type Output = ExtCard;

    fn add(self, rhs: ExtCard) -> ExtCard {
        match (self, rhs) {
            (ExtCard::Finite(a), ExtCard::Finite(b)) => a.checked_add(b).map_or(ExtCard::Inf, ExtCard::Finite),
            _ => ExtCard::Inf,
        }
    }
}

impl Sum for ExtCard {
    fn sum<I: Iterator<Item = ExtCard>>(iter: I) -> ExtCard {
        iter.fold(ExtCard::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a ExtCard> for ExtCard {
    fn sum<I: Iterator<Item = &'a ExtCard>>(iter: I) -> ExtCard {
        iter.copied().sum()
    }
}

impl fmt::Display for ExtCard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtCard::Finite(n) => write!(f, "{n}"),
            ExtCard::Inf => f.write_str("inf"),
        }
    }
}

// Serialized as a bare integer or the string "inf".
impl Serialize for ExtCard {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtCard::Finite(n) => serializer.serialize_u64(*n),
            ExtCard::Inf => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtCard {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(u64),
            Str(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Int(n) => Ok(ExtCard::Finite(n)),
            Repr::Str(s) if s.eq_ignore_ascii_case("inf") => Ok(ExtCard::Inf),
            Repr::Str(s) => Err(serde::de::Error::custom(format!(
                "expected a nonnegative integer or \"inf\", got \"{s}\""
            ))),
        }
    }
}

/// Sum of extended cardinals; `Inf` absorbs, the empty sum is 0.
pub fn ext_sum(terms: &[ExtCard]) -> ExtCard {
    terms.iter().sum()
}

/// `X ⪯ Y` for Hilbert spaces of dimensions `a` and `b`: `a <= b`.
pub fn embeds(a: ExtCard, b: ExtCard) -> bool {
    a <= b
}

/// `X ≺ Y` for Hilbert spaces of dimensions `a` and `b`: `a < b` and `b` infinite.
pub fn essentially_embeds(a: ExtCard, b: ExtCard) -> bool {
    a < b && b.is_infinite()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: u64) -> ExtCard {
        ExtCard::Finite(n)
    }

    fn sample() -> Vec<ExtCard> {
        vec![f(0), f(1), f(2), f(3), f(7), INF]
    }

    #[test]
    fn sum_examples() {
        assert_eq!(ext_sum(&[f(2), f(3)]), f(5));
        assert_eq!(ext_sum(&[f(0)]), f(0));
        assert_eq!(ext_sum(&[f(1), INF, f(4)]), INF);
        assert_eq!(ext_sum(&[]), f(0));
    }

    #[test]
    fn embedding_examples() {
        assert!(embeds(f(3), f(5)));
        assert!(!embeds(INF, f(3)));
        assert!(embeds(INF, INF));

        assert!(essentially_embeds(f(3), INF));
        assert!(!essentially_embeds(INF, INF));
        assert!(!essentially_embeds(f(2), f(5)));
    }

    #[test]
    fn order_places_inf_on_top() {
        for a in sample() {
            if a.is_finite() {
                assert!(a < INF);
            }
        }
        assert_eq!(INF, INF);
        assert!(f(2) < f(3));
    }

    #[test]
    fn overflow_saturates_to_inf() {
        assert_eq!(f(u64::MAX) + f(1), INF);
    }

    #[test]
    fn sum_laws_by_enumeration() {
        let vals = sample();
        for &a in &vals {
            assert_eq!(a + f(0), a);
            assert_eq!(a + INF, INF);
            for &b in &vals {
                assert_eq!(a + b, b + a);
                for &c in &vals {
                    assert_eq!((a + b) + c, a + (b + c));
                }
            }
        }
    }

    #[test]
    fn embedding_laws_by_enumeration() {
        let vals = sample();
        for &a in &vals {
            assert!(embeds(a, a));
            for &b in &vals {
                if essentially_embeds(a, b) {
                    assert!(embeds(a, b));
                    assert!(!embeds(b, a));
                }
                for &c in &vals {
                    if embeds(a, b) && embeds(b, c) {
                        assert!(embeds(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn serde_repr() {
        assert_eq!(serde_json::to_string(&f(4)).unwrap(), "4");
        assert_eq!(serde_json::to_string(&INF).unwrap(), "\"inf\"");
        assert_eq!(serde_json::from_str::<ExtCard>("\"inf\"").unwrap(), INF);
        assert_eq!(serde_json::from_str::<ExtCard>("12").unwrap(), f(12));
        assert!(serde_json::from_str::<ExtCard>("\"lots\"").is_err());
        assert!(serde_json::from_str::<ExtCard>("-1").is_err());
    }
}
