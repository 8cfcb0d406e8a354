use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational value; every quantity the engine computes is carried in
/// this type. Always stored reduced with a positive denominator.
pub type Rational = BigRational;

/// `n / d` from machine integers. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `1 / 2^k`.
pub fn half_pow(k: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(2u8).pow(k as u32))
}

/// Parses `p/q` or a bare integer `p`; `q` must be positive.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidRational(text.to_string());
    let mut parts = text.splitn(2, '/');
    let numer: BigInt = parts
        .next()
        .unwrap_or_default()
        .trim()
        .parse()
        .map_err(|_| bad())?;
    match parts.next() {
        None => Ok(Rational::from_integer(numer)),
        Some(den_text) => {
            let denom: BigInt = den_text.trim().parse().map_err(|_| bad())?;
            if denom <= BigInt::zero() {
                return Err(bad());
            }
            Ok(Rational::new(numer, denom))
        }
    }
}

/// Renders the reduced form `p/q`, or just `p` when the denominator is 1.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Exact value of `0.d₁d₂…` in the given base, where the digit stream is
/// `pre` followed by `per` repeating forever. An empty `per` denotes an
/// all-zero tail.
pub fn digit_series(base: u32, pre: &[u8], per: &[u8]) -> Rational {
    let b = BigInt::from(base);
    let mut pre_val = BigInt::zero();
    for &d in pre {
        debug_assert!((d as u32) < base);
        pre_val = &pre_val * &b + BigInt::from(d);
    }
    let shift = b.pow(pre.len() as u32);
    let head = Rational::new(pre_val, shift.clone());
    if per.is_empty() {
        return head;
    }
    let mut per_val = BigInt::zero();
    for &d in per {
        debug_assert!((d as u32) < base);
        per_val = &per_val * &b + BigInt::from(d);
    }
    // 0.(per) = per_val / (b^|per| − 1), then shifted past the preamble.
    let cycle = b.pow(per.len() as u32) - BigInt::one();
    head + Rational::new(per_val, shift * cycle)
}

/// Greedy base-`base` expansion of a value in [0, 1): digit preamble plus
/// the repeating block found by remainder-cycle detection. Long division
/// yields the terminating form for values with a power-of-base denominator
/// (trailing zero period), never a trailing (base−1) tail.
pub fn radix_expansion(value: &Rational, base: u32) -> Result<(Vec<u8>, Vec<u8>)> {
    debug_assert!(base >= 2);
    if value.is_negative() || *value >= Rational::one() {
        return Err(Error::ValueOutOfRange(format_rational(value)));
    }
    if let (Some(n), Some(d)) = (value.numer().to_u64(), value.denom().to_u64()) {
        if d.checked_mul(base as u64).is_some() {
            return Ok(expand_u64(n, d, base as u64));
        }
    }
    Ok(expand_big(value.numer(), value.denom(), base))
}

const REMAINDER_TABLE_LIMIT: u64 = 1 << 22;

fn expand_u64(n: u64, d: u64, base: u64) -> (Vec<u8>, Vec<u8>) {
    let mut digits: Vec<u8> = Vec::new();
    let mut r = n;
    if d <= REMAINDER_TABLE_LIMIT {
        // seen[r] = 1 + position of the digit produced from remainder r.
        let mut seen = vec![0usize; d as usize];
        loop {
            let slot = &mut seen[r as usize];
            if *slot != 0 {
                let per = digits.split_off(*slot - 1);
                return (digits, per);
            }
            *slot = digits.len() + 1;
            let scaled = r * base;
            digits.push((scaled / d) as u8);
            r = scaled % d;
        }
    }
    let mut seen: HashMap<u64, usize> = HashMap::new();
    loop {
        if let Some(&start) = seen.get(&r) {
            let per = digits.split_off(start);
            return (digits, per);
        }
        seen.insert(r, digits.len());
        let scaled = r * base;
        digits.push((scaled / d) as u8);
        r = scaled % d;
    }
}

fn expand_big(n: &BigInt, d: &BigInt, base: u32) -> (Vec<u8>, Vec<u8>) {
    let b = BigInt::from(base);
    let mut digits: Vec<u8> = Vec::new();
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    let mut r = n.clone();
    loop {
        if let Some(&start) = seen.get(&r) {
            let per = digits.split_off(start);
            return (digits, per);
        }
        seen.insert(r.clone(), digits.len());
        let scaled = &r * &b;
        let (q, rem) = scaled.div_mod_floor(d);
        digits.push(q.to_u8().expect("digit below base"));
        r = rem;
    }
}

/// Fixed-point decimal rendering with round-half-even at `places` digits
/// after the point.
pub fn decimal_string(value: &Rational, places: usize) -> String {
    let scale = BigInt::from(10u8).pow(places as u32);
    let scaled = value * Rational::from_integer(scale);
    let (mut units, rem) = scaled.numer().div_mod_floor(scaled.denom());
    let twice: BigInt = &rem * 2;
    let round_up = match twice.cmp(scaled.denom()) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => units.is_odd(),
    };
    if round_up {
        units += 1;
    }
    if places == 0 {
        return units.to_string();
    }
    let negative = units.is_negative();
    let mut digits = units.magnitude().to_string();
    if digits.len() <= places {
        digits = format!("{}{digits}", "0".repeat(places + 1 - digits.len()));
    }
    let split = digits.len() - places;
    format!(
        "{}{}.{}",
        if negative { "-" } else { "" },
        &digits[..split],
        &digits[split..]
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expansion(n: i64, d: i64, base: u32) -> (String, String) {
        let (pre, per) = radix_expansion(&ratio(n, d), base).unwrap();
        let s = |v: Vec<u8>| v.into_iter().map(|d| (b'0' + d) as char).collect();
        (s(pre), s(per))
    }

    #[test]
    fn parses_and_formats() {
        assert_eq!(parse_rational("2/4").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("7").unwrap(), ratio(7, 1));
        assert_eq!(parse_rational("-1/3").unwrap(), ratio(-1, 3));
        assert_eq!(format_rational(&ratio(2, 4)), "1/2");
        assert_eq!(format_rational(&ratio(3, 1)), "3");
        assert_eq!(format_rational(&ratio(0, 5)), "0");
        for bad in ["", "1/0", "1/-2", "a/b", "1/2/3", "1.5"] {
            assert!(parse_rational(bad).is_err(), "{bad} should not parse");
        }
    }

    #[test]
    fn digit_series_closed_forms() {
        // 0.(01)₂ = 1/3, 0.1(0)₂ = 1/2, 0.(2)₃ = 1, 0.(02)₃ = 1/4.
        assert_eq!(digit_series(2, &[], &[0, 1]), ratio(1, 3));
        assert_eq!(digit_series(2, &[1], &[0]), ratio(1, 2));
        assert_eq!(digit_series(2, &[1], &[]), ratio(1, 2));
        assert_eq!(digit_series(3, &[], &[2]), ratio(1, 1));
        assert_eq!(digit_series(3, &[], &[0, 2]), ratio(1, 4));
        assert_eq!(digit_series(2, &[], &[]), ratio(0, 1));
    }

    #[test]
    fn expansion_finds_cycles() {
        assert_eq!(expansion(1, 3, 2), ("".into(), "01".into()));
        assert_eq!(expansion(1, 2, 2), ("1".into(), "0".into()));
        assert_eq!(expansion(0, 1, 2), ("".into(), "0".into()));
        assert_eq!(expansion(5, 8, 2), ("101".into(), "0".into()));
        assert_eq!(expansion(1, 6, 2), ("0".into(), "01".into()));
        assert_eq!(expansion(2, 3, 3), ("2".into(), "0".into()));
        assert_eq!(expansion(1, 7, 10), ("".into(), "142857".into()));
    }

    #[test]
    fn expansion_round_trips_against_series() {
        for d in 1..=60i64 {
            for n in 0..d {
                for base in [2u32, 3] {
                    let v = ratio(n, d);
                    let (pre, per) = radix_expansion(&v, base).unwrap();
                    assert!(!per.is_empty());
                    assert_eq!(digit_series(base, &pre, &per), v, "{n}/{d} base {base}");
                }
            }
        }
    }

    #[test]
    fn expansion_rejects_out_of_range() {
        assert!(radix_expansion(&ratio(1, 1), 2).is_err());
        assert!(radix_expansion(&ratio(-1, 2), 2).is_err());
        assert!(radix_expansion(&ratio(3, 2), 2).is_err());
    }

    #[test]
    fn big_denominator_expansion_matches_small_path() {
        // 2^68 exceeds the u64 fast path and terminates after 68 digits.
        let huge: BigInt = BigInt::one() << 68;
        let v = Rational::new(BigInt::one(), huge.clone());
        let (pre, per) = radix_expansion(&v, 2).unwrap();
        assert_eq!(pre.len(), 68);
        assert_eq!(per, vec![0]);
        assert_eq!(digit_series(2, &pre, &per), Rational::new(BigInt::one(), huge));
    }

    #[test]
    fn decimal_rounding_is_half_even() {
        assert_eq!(decimal_string(&ratio(2, 3), 3), "0.667");
        assert_eq!(decimal_string(&ratio(1, 1), 3), "1.000");
        assert_eq!(decimal_string(&ratio(1, 8), 2), "0.12");
        assert_eq!(decimal_string(&ratio(3, 8), 2), "0.38");
        assert_eq!(decimal_string(&ratio(1, 4), 1), "0.2");
        assert_eq!(decimal_string(&ratio(3, 4), 1), "0.8");
        assert_eq!(decimal_string(&ratio(0, 1), 4), "0.0000");
        assert_eq!(decimal_string(&ratio(5, 2), 0), "2");
        assert_eq!(decimal_string(&ratio(-1, 8), 2), "-0.12");
    }
}
