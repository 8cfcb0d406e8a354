use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::bits::{bits_string, canonical_digits, parse_bits};
use crate::error::{Error, Result};
use crate::rational::{digit_series, Rational};

/// An eventually periodic binary sequence `preamble · period · period · …`,
/// held in canonical form: the period is primitive and the last preamble bit
/// differs from the last period bit. Canonical forms are unique, so `==`
/// decides equality of the underlying infinite sequences.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinSeq {
    pre: Vec<u8>,
    per: Vec<u8>,
}

impl BinSeq {
    /// Canonicalizing constructor; accepts any spelling of the sequence.
    pub fn new(preamble: Vec<u8>, period: Vec<u8>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        for &b in preamble.iter().chain(&period) {
            if b > 1 {
                return Err(Error::InvalidBits(format!("digit {b}")));
            }
        }
        let (pre, per) = canonical_digits(&preamble, &period);
        Ok(BinSeq { pre, per })
    }

    /// The all-zeros sequence (the point that maps to 0).
    pub fn zeros() -> Self {
        BinSeq { pre: vec![], per: vec![0] }
    }

    /// The all-ones sequence (the point that maps to 1).
    pub fn ones() -> Self {
        BinSeq { pre: vec![], per: vec![1] }
    }

    pub fn preamble(&self) -> &[u8] {
        &self.pre
    }

    pub fn period(&self) -> &[u8] {
        &self.per
    }

    /// The i-th bit, 1-based. Panics if `i == 0`.
    pub fn bit(&self, i: usize) -> u8 {
        assert!(i >= 1, "sequence positions start at 1");
        let i = i - 1;
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.per[(i - self.pre.len()) % self.per.len()]
        }
    }

    /// Prepends `bits`, keeping the result canonical.
    pub fn prepend(&self, bits: &[u8]) -> Self {
        let mut pre = bits.to_vec();
        pre.extend_from_slice(&self.pre);
        let (pre, per) = canonical_digits(&pre, &self.per);
        BinSeq { pre, per }
    }

    /// Drops the first `count` bits, keeping the result canonical.
    pub fn skip(&self, count: usize) -> Self {
        if count <= self.pre.len() {
            let (pre, per) = canonical_digits(&self.pre[count..], &self.per);
            return BinSeq { pre, per };
        }
        let mut per = self.per.clone();
        per.rotate_left((count - self.pre.len()) % self.per.len());
        let (pre, per) = canonical_digits(&[], &per);
        BinSeq { pre, per }
    }

    /// Bits `1..=count` as a vector.
    pub fn take(&self, count: usize) -> Vec<u8> {
        (1..=count).map(|i| self.bit(i)).collect()
    }

    /// Positions beyond which the two sequences cannot differ: if all bits
    /// up to this index agree, the sequences are equal.
    fn agreement_horizon(&self, other: &BinSeq) -> usize {
        self.pre.len().max(other.pre.len()) + self.per.len().lcm(&other.per.len())
    }
}

/// Exact distance `Σ |x_i − y_i| / 2^i`: the difference stream is itself
/// eventually periodic, so a closed-form geometric summation applies.
pub fn metric(x: &BinSeq, y: &BinSeq) -> Rational {
    let pre_len = x.pre.len().max(y.pre.len());
    let per_len = x.per.len().lcm(&y.per.len());
    let pre: Vec<u8> = (1..=pre_len).map(|i| x.bit(i).abs_diff(y.bit(i))).collect();
    let per: Vec<u8> = (pre_len + 1..=pre_len + per_len)
        .map(|i| x.bit(i).abs_diff(y.bit(i)))
        .collect();
    digit_series(2, &pre, &per)
}

/// Exact value of the quotient map `f(x) = Σ x_i / 2^i` onto [0, 1].
pub fn binary_value(x: &BinSeq) -> Rational {
    digit_series(2, &x.pre, &x.per)
}

impl PartialOrd for BinSeq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on the unrolled bit streams.
impl Ord for BinSeq {
    fn cmp(&self, other: &Self) -> Ordering {
        for i in 1..=self.agreement_horizon(other) {
            match self.bit(i).cmp(&other.bit(i)) {
                Ordering::Equal => continue,
                unequal => return unequal,
            }
        }
        Ordering::Equal
    }
}

/// Text notation `pre(per)`, e.g. `01(10)`; empty preamble prints as `(10)`.
impl fmt::Display for BinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", bits_string(&self.pre), bits_string(&self.per))
    }
}

impl fmt::Debug for BinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for BinSeq {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::InvalidNotation(text.to_string());
        let open = text.find('(').ok_or_else(bad)?;
        let close = text.rfind(')').ok_or_else(bad)?;
        if close != text.len() - 1 || close < open {
            return Err(bad());
        }
        let pre = parse_bits(&text[..open]).map_err(|_| bad())?;
        let per = parse_bits(&text[open + 1..close]).map_err(|_| bad())?;
        if per.is_empty() {
            return Err(bad());
        }
        BinSeq::new(pre, per)
    }
}

/// Test helper: parse `pre(per)` notation, panicking on bad input.
#[cfg(test)]
pub(crate) fn seq(text: &str) -> BinSeq {
    text.parse().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn canonicalizes_on_construction() {
        assert_eq!(seq("01(01)"), seq("(01)"));
        assert_eq!(seq("(0101)"), seq("(01)"));
        let already = seq("1(0)");
        assert_eq!(already.preamble(), &[1]);
        assert_eq!(already.period(), &[0]);
        assert!(BinSeq::new(vec![0], vec![]).is_err());
        assert!(BinSeq::new(vec![2], vec![0]).is_err());
    }

    #[test]
    fn indexes_preamble_then_cycles_period() {
        assert_eq!(seq("(01)").bit(3), 0);
        assert_eq!(seq("1(0)").bit(1), 1);
        assert_eq!(seq("1(0)").bit(7), 0);
        let x = seq("011(010)");
        let unrolled = [0, 1, 1, 0, 1, 0, 0, 1, 0, 0, 1, 0];
        for (i, &b) in unrolled.iter().enumerate() {
            assert_eq!(x.bit(i + 1), b);
        }
    }

    #[test]
    #[should_panic(expected = "positions start at 1")]
    fn bit_zero_panics() {
        seq("(0)").bit(0);
    }

    #[test]
    fn metric_examples() {
        assert_eq!(metric(&BinSeq::zeros(), &BinSeq::ones()), ratio(1, 1));
        let x = seq("01(101)");
        assert_eq!(metric(&x, &x), ratio(0, 1));
        assert_eq!(metric(&BinSeq::zeros(), &seq("1(0)")), ratio(1, 2));
        // Difference stream is (01001) repeating: 0b01001 / (2^5 − 1).
        assert_eq!(metric(&seq("(10000)"), &seq("(11001)")), ratio(9, 31));
    }

    #[test]
    fn metric_agrees_with_truncated_summation() {
        let pairs = [
            ("(01)", "1(0)"),
            ("(0)", "(1)"),
            ("011(010)", "(01)"),
            ("1(10)", "1(100)"),
        ];
        for (a, b) in pairs {
            let (x, y) = (seq(a), seq(b));
            let exact = metric(&x, &y);
            let mut truncated = ratio(0, 1);
            for i in 1..=64 {
                if x.bit(i) != y.bit(i) {
                    truncated += crate::rational::half_pow(i);
                }
            }
            let err = exact - truncated;
            assert!(err >= ratio(0, 1) && err <= crate::rational::half_pow(64));
        }
    }

    #[test]
    fn binary_values() {
        assert_eq!(binary_value(&BinSeq::zeros()), ratio(0, 1));
        assert_eq!(binary_value(&BinSeq::ones()), ratio(1, 1));
        assert_eq!(binary_value(&seq("(01)")), ratio(1, 3));
        assert_eq!(binary_value(&seq("1(0)")), ratio(1, 2));
    }

    #[test]
    fn order_is_lexicographic_on_streams() {
        assert!(seq("(0)") < seq("(1)"));
        assert!(seq("0(1)") < seq("1(0)"));
        assert!(seq("(01)") < seq("01(10)"));
        assert_eq!(seq("01(01)").cmp(&seq("(01)")), Ordering::Equal);
        // 0111… < 1000… even though both map to 1/2.
        assert!(seq("0(1)") < seq("1(0)"));
    }

    #[test]
    fn prepend_and_skip_are_inverse() {
        let x = seq("01(100)");
        let grown = x.prepend(&[1, 0, 1]);
        assert_eq!(grown.skip(3), x);
        assert_eq!(grown.bit(1), 1);
        assert_eq!(grown.bit(2), 0);
        assert_eq!(grown.bit(3), 1);
        assert_eq!(grown.bit(4), x.bit(1));
        assert_eq!(x.skip(0), x);
        assert_eq!(seq("(01)").skip(3), seq("(10)"));
        assert_eq!(BinSeq::zeros().prepend(&[1, 0]), seq("10(0)").prepend(&[]));
    }

    #[test]
    fn notation_round_trips() {
        for text in ["(01)", "1(0)", "01(10)", "(1)", "011(010)"] {
            let x = seq(text);
            assert_eq!(x.to_string(), text);
            assert_eq!(seq(&x.to_string()), x);
        }
        // Parsing accepts non-canonical spellings and canonicalizes them.
        assert_eq!(seq("0110(100)").to_string(), "011(010)");
        for bad in ["", "01", "()", "(", ")", "1)0(", "(01)1", "2(0)", "(0)(1)"] {
            assert!(bad.parse::<BinSeq>().is_err(), "{bad} should not parse");
        }
    }
}
