use crate::error::{Error, Result};

/// Parses a string of `0`/`1` characters into bits. Empty input is allowed.
pub fn parse_bits(text: &str) -> Result<Vec<u8>> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::InvalidBits(text.to_string())),
        })
        .collect()
}

pub fn bits_string(bits: &[u8]) -> String {
    bits.iter().map(|&b| (b'0' + b) as char).collect()
}

/// Shortest block whose repetition spells out `block` (the primitive root).
pub fn primitive_root(block: &[u8]) -> &[u8] {
    let n = block.len();
    for d in 1..=n {
        if n % d == 0 && block.iter().zip(block.iter().cycle().skip(d).take(n)).all(|(a, b)| a == b)
        {
            return &block[..d];
        }
    }
    block
}

/// Canonical form of the digit stream `pre · per · per · …`: the period is
/// reduced to its primitive root, then the roll-in rule runs (while the last
/// preamble digit equals the last period digit, drop it and rotate the
/// period right). Two streams are equal digit-for-digit iff their canonical
/// forms are identical. Works for any digit alphabet.
pub fn canonical_digits(pre: &[u8], per: &[u8]) -> (Vec<u8>, Vec<u8>) {
    debug_assert!(!per.is_empty());
    let mut per = primitive_root(per).to_vec();
    let mut pre = pre.to_vec();
    while pre.last().is_some_and(|last| last == per.last().unwrap()) {
        pre.pop();
        per.rotate_right(1);
    }
    (pre, per)
}
