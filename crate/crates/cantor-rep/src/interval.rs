use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fiber::Fiber;
use crate::rational::{format_rational, radix_expansion, Rational};
use crate::seq::{binary_value, BinSeq};

/// Where a rational sits relative to the dyadic set `{l/2^n}` in [0, 1]:
/// the endpoints have one binary expansion, dyadic interior points have
/// two, everything else has one (eventually periodic) expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DyadicClass {
    EndpointZero,
    EndpointOne,
    /// `y = l/2^n` with `n ≥ 1` and odd `l`, `0 < l < 2^n`.
    DyadicInterior { n: u32, l: BigInt },
    NonDyadic,
}

/// Classifies a rational in [0, 1]; errors outside that interval.
pub fn classify(y: &Rational) -> Result<DyadicClass> {
    if y.is_negative() || *y > Rational::one() {
        return Err(Error::ValueOutOfRange(format_rational(y)));
    }
    if y.is_zero() {
        return Ok(DyadicClass::EndpointZero);
    }
    if y.is_one() {
        return Ok(DyadicClass::EndpointOne);
    }
    let denom = y.denom();
    if denom.magnitude().count_ones() == 1 {
        Ok(DyadicClass::DyadicInterior { n: denom.bits() as u32 - 1, l: y.numer().clone() })
    } else {
        Ok(DyadicClass::NonDyadic)
    }
}

/// The fiber of the quotient map `f(x) = Σ x_i/2^i` over `y`: a doubleton
/// `{ …a_{n−1} 0 1̄ , …a_{n−1} 1 0̄ }` when `y = l/2^n` is dyadic interior,
/// otherwise the single eventually periodic expansion of `y`.
pub fn fiber_unit_interval(y: &Rational) -> Result<Fiber> {
    match classify(y)? {
        DyadicClass::EndpointZero => Ok(Fiber::singleton(BinSeq::zeros())),
        DyadicClass::EndpointOne => Ok(Fiber::singleton(BinSeq::ones())),
        DyadicClass::DyadicInterior { n, .. } => {
            let (digits, zero_tail) = radix_expansion(y, 2)?;
            debug_assert_eq!(zero_tail, vec![0]);
            debug_assert_eq!(digits.len() as u32, n);
            debug_assert_eq!(digits.last(), Some(&1));
            let mut head = digits;
            head.pop();
            let mut low = head.clone();
            low.push(0);
            let mut high = head;
            high.push(1);
            Ok(Fiber::new(vec![BinSeq::new(low, vec![1])?, BinSeq::new(high, vec![0])?])?)
        }
        DyadicClass::NonDyadic => {
            let (pre, per) = radix_expansion(y, 2)?;
            Ok(Fiber::singleton(BinSeq::new(pre, per)?))
        }
    }
}

/// The common binary value of a fiber's elements; errors if they disagree
/// (then the set is not a fiber of the quotient map).
pub fn decode_fiber(fiber: &Fiber) -> Result<Rational> {
    let mut elements = fiber.iter();
    let value = binary_value(elements.next().expect("fibers are nonempty"));
    for e in elements {
        let other = binary_value(e);
        if other != value {
            return Err(Error::NotAFiber(format_rational(&value), format_rational(&other)));
        }
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::seq::seq;

    #[test]
    fn classifies_unit_interval_rationals() {
        assert_eq!(classify(&ratio(0, 1)).unwrap(), DyadicClass::EndpointZero);
        assert_eq!(classify(&ratio(1, 1)).unwrap(), DyadicClass::EndpointOne);
        assert_eq!(
            classify(&ratio(1, 2)).unwrap(),
            DyadicClass::DyadicInterior { n: 1, l: BigInt::from(1) }
        );
        assert_eq!(
            classify(&ratio(6, 16)).unwrap(),
            DyadicClass::DyadicInterior { n: 3, l: BigInt::from(3) }
        );
        assert_eq!(classify(&ratio(1, 3)).unwrap(), DyadicClass::NonDyadic);
        assert_eq!(classify(&ratio(5, 6)).unwrap(), DyadicClass::NonDyadic);
        assert!(classify(&ratio(-1, 2)).is_err());
        assert!(classify(&ratio(3, 2)).is_err());
    }

    #[test]
    fn dyadic_fibers_are_doubletons() {
        let f = fiber_unit_interval(&ratio(1, 2)).unwrap();
        assert_eq!(f.elements(), &[seq("0(1)"), seq("1(0)")]);
        let f = fiber_unit_interval(&ratio(3, 8)).unwrap();
        assert_eq!(f.elements(), &[seq("010(1)"), seq("011(0)")]);
        for e in &f {
            assert_eq!(binary_value(e), ratio(3, 8));
        }
    }

    #[test]
    fn non_dyadic_and_endpoint_fibers_are_singletons() {
        assert_eq!(fiber_unit_interval(&ratio(1, 3)).unwrap().elements(), &[seq("(01)")]);
        assert_eq!(fiber_unit_interval(&ratio(0, 1)).unwrap().elements(), &[BinSeq::zeros()]);
        assert_eq!(fiber_unit_interval(&ratio(1, 1)).unwrap().elements(), &[BinSeq::ones()]);
        assert_eq!(fiber_unit_interval(&ratio(5, 6)).unwrap().elements(), &[seq("1(10)")]);
    }

    #[test]
    fn decode_recovers_the_value() {
        for y in [ratio(0, 1), ratio(1, 1), ratio(1, 2), ratio(1, 3), ratio(7, 12), ratio(5, 32)]
        {
            let f = fiber_unit_interval(&y).unwrap();
            assert_eq!(decode_fiber(&f).unwrap(), y);
        }
        let not_fiber = Fiber::new(vec![BinSeq::zeros(), BinSeq::ones()]).unwrap();
        assert!(matches!(decode_fiber(&not_fiber), Err(Error::NotAFiber(..))));
    }

    #[test]
    fn fiber_size_follows_the_dyadic_law() {
        for b in 1..=64i64 {
            for a in 0..=b {
                let y = ratio(a, b);
                let f = fiber_unit_interval(&y).unwrap();
                let dyadic = matches!(classify(&y).unwrap(), DyadicClass::DyadicInterior { .. });
                assert_eq!(f.len() == 2, dyadic, "{a}/{b}");
                assert_eq!(decode_fiber(&f).unwrap(), y);
            }
        }
    }
}
