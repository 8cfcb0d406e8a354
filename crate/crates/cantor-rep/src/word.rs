use std::fmt;
use std::str::FromStr;

use crate::bits::{bits_string, parse_bits};
use crate::error::{Error, Result};
use crate::rational::{half_pow, Rational};
use crate::seq::BinSeq;

/// A finite binary word `k₁…k_i`. Applying it to a sequence prepends the
/// bits, i.e. composes the two prepend-one-bit contractions in order; its
/// cone is the image of that composition, the set of sequences carrying the
/// word as a prefix. The empty word is the identity (whole space).
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

/// How two cones sit relative to each other: prefix comparability decides
/// intersection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeRelation {
    Disjoint,
    Nested,
    Equal,
}

impl Word {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        for &b in &bits {
            if b > 1 {
                return Err(Error::InvalidBits(format!("digit {b}")));
            }
        }
        Ok(Word(bits))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The concatenation `self · tail`; applying it to a sequence equals
    /// applying `tail` first and then `self`.
    pub fn join(&self, tail: &Word) -> Word {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&tail.0);
        Word(bits)
    }

    /// `F_{k₁}∘…∘F_{k_i}(x)`: prepends the word's bits to the sequence.
    pub fn apply(&self, x: &BinSeq) -> BinSeq {
        x.prepend(&self.0)
    }

    /// Membership of `x` in this word's cone: the word is a prefix of `x`.
    pub fn cone_contains(&self, x: &BinSeq) -> bool {
        self.0.iter().enumerate().all(|(j, &b)| x.bit(j + 1) == b)
    }

    /// Diameter of the cone under the metric: `2^(−|w|)`, attained by the
    /// pair `w·0̄`, `w·1̄`.
    pub fn cone_diameter(&self) -> Rational {
        half_pow(self.0.len())
    }
}

/// Equal iff identical; nested iff one word is a proper prefix of the other
/// (cone containment); disjoint otherwise.
pub fn cone_relation(a: &Word, b: &Word) -> ConeRelation {
    let shared = a.len().min(b.len());
    if a.bits()[..shared] != b.bits()[..shared] {
        return ConeRelation::Disjoint;
    }
    if a.len() == b.len() {
        ConeRelation::Equal
    } else {
        ConeRelation::Nested
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&bits_string(&self.0))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        Ok(Word(parse_bits(text)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::seq::seq;

    fn word(text: &str) -> Word {
        text.parse().unwrap()
    }

    #[test]
    fn apply_prepends_and_canonicalizes() {
        assert_eq!(word("0").apply(&BinSeq::ones()), seq("0(1)"));
        let x = seq("01(10)");
        assert_eq!(word("").apply(&x), x);
        assert_eq!(word("10").apply(&BinSeq::zeros()), seq("1(0)"));
        let grown = word("10").apply(&x);
        for j in 1..=2 {
            assert_eq!(grown.bit(j), word("10").bits()[j - 1]);
        }
        for j in 3..=14 {
            assert_eq!(grown.bit(j), x.bit(j - 2));
        }
    }

    #[test]
    fn cone_membership_is_prefix_check() {
        assert!(word("10").cone_contains(&seq("1(0)")));
        assert!(!word("11").cone_contains(&seq("1(0)")));
        assert!(word("").cone_contains(&seq("01(10)")));
        assert!(word("01").cone_contains(&word("01").apply(&seq("(10)"))));
    }

    #[test]
    fn cone_relations() {
        assert_eq!(cone_relation(&word("0"), &word("10")), ConeRelation::Disjoint);
        assert_eq!(cone_relation(&word("1"), &word("10")), ConeRelation::Nested);
        assert_eq!(cone_relation(&word("10"), &word("10")), ConeRelation::Equal);
        assert_eq!(cone_relation(&word(""), &word("0")), ConeRelation::Nested);
        assert_eq!(cone_relation(&word(""), &word("")), ConeRelation::Equal);
    }

    #[test]
    fn cone_diameter_is_two_to_minus_length() {
        assert_eq!(word("").cone_diameter(), ratio(1, 1));
        assert_eq!(word("10").cone_diameter(), ratio(1, 4));
        assert_eq!(word("10110101").cone_diameter(), ratio(1, 256));
        // Attained by the all-zeros / all-ones pair inside the cone.
        let w = word("10");
        assert_eq!(
            crate::seq::metric(&w.apply(&BinSeq::zeros()), &w.apply(&BinSeq::ones())),
            w.cone_diameter()
        );
    }

    #[test]
    fn join_matches_composition() {
        let (w1, w2) = (word("10"), word("011"));
        let x = seq("1(01)");
        assert_eq!(w1.join(&w2).apply(&x), w1.apply(&w2.apply(&x)));
    }

    #[test]
    fn rejects_non_bits() {
        assert!("012".parse::<Word>().is_err());
        assert!(Word::new(vec![0, 7]).is_err());
    }
}
