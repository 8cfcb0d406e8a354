use num_traits::One;

use crate::bits::canonical_digits;
use crate::rational::{digit_series, radix_expansion, Rational};
use crate::seq::BinSeq;

/// The homeomorphism onto the Cantor Middle-Third Set: `h(x) = Σ 2x_i/3^i`,
/// an exact rational in [0, 1] whose base-3 expansion avoids the digit 1.
pub fn cmts_value(x: &BinSeq) -> Rational {
    let double = |bits: &[u8]| bits.iter().map(|&b| 2 * b).collect::<Vec<u8>>();
    digit_series(3, &double(x.preamble()), &double(x.period()))
}

/// The base-3 expansion of `value` using only digits {0, 2}, if one exists,
/// in canonical (preamble, period) form. Greedy long division returns the
/// terminating expansion for denominators that are powers of 3, so a final
/// digit 1 there is rewritten to `…0(2)` before judging membership.
pub fn cmts_expansion(value: &Rational) -> Option<(Vec<u8>, Vec<u8>)> {
    if value.is_one() {
        return Some((vec![], vec![2]));
    }
    let (pre, per) = radix_expansion(value, 3).ok()?;
    let clean = |digits: &[u8]| digits.iter().all(|&d| d != 1);
    if clean(&pre) && clean(&per) {
        return Some(canonical_digits(&pre, &per));
    }
    if per == [0] && pre.last() == Some(&1) && clean(&pre[..pre.len() - 1]) {
        let mut rewritten = pre;
        *rewritten.last_mut().unwrap() = 0;
        return Some(canonical_digits(&rewritten, &[2]));
    }
    None
}

/// Membership of a rational in the Cantor Middle-Third Set.
pub fn in_cmts(value: &Rational) -> bool {
    cmts_expansion(value).is_some()
}
