//! Data bitstrings: parsing from text and the binary expansion of pi/4.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Parses a string of `0`/`1` characters. Whitespace and `_` are ignored.
pub fn parse_bits(text: &str) -> Result<Vec<bool>> {
    text.chars()
        .filter(|c| !c.is_whitespace() && *c != '_')
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("bad bit character {other:?}"))),
        })
        .collect()
}

/// Parses hexadecimal text (optional `0x` prefix) into bits, most
/// significant bit of each digit first.
pub fn parse_hex(text: &str) -> Result<Vec<bool>> {
    let t = text.trim();
    let t = t
        .strip_prefix("0x")
        .or_else(|| t.strip_prefix("0X"))
        .unwrap_or(t);
    let mut bits = Vec::with_capacity(4 * t.len());
    for c in t.chars().filter(|c| !c.is_whitespace() && *c != '_') {
        let d = c
            .to_digit(16)
            .ok_or_else(|| Error::Parse(format!("bad hex digit {c:?}")))?;
        bits.extend((0..4).rev().map(|k| d >> k & 1 == 1));
    }
    if bits.is_empty() {
        return Err(Error::Parse("empty hex data".into()));
    }
    Ok(bits)
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Fixed-point `arctan(1/x) * 2^scale`, truncated.
fn arctan_inv(x: u32, scale: u64) -> BigUint {
    let x = BigUint::from(x);
    let x2 = &x * &x;
    let mut power = (BigUint::one() << scale) / &x;
    let mut sum_pos = BigUint::zero();
    let mut sum_neg = BigUint::zero();
    let mut k = 0u32;
    while !power.is_zero() {
        let term = &power / BigUint::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum_pos += term;
        } else {
            sum_neg += term;
        }
        power /= &x2;
        k += 1;
    }
    sum_pos - sum_neg
}

/// First `count` bits after the binary point of pi/4, from Machin's formula
/// `pi/4 = 4 arctan(1/5) - arctan(1/239)` with guard bits.
pub fn pi_over_4_bits(count: usize) -> Vec<bool> {
    let guard = 64;
    let scale = count as u64 + guard;
    let value = (arctan_inv(5, scale) << 2usize) - arctan_inv(239, scale);
    let truncated = value >> guard as usize;
    (0..count)
        .map(|i| truncated.bit((count - 1 - i) as u64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi4_prefix_matches_float() {
        let bits = pi_over_4_bits(50);
        let mut x = std::f64::consts::FRAC_PI_4;
        for (i, &b) in bits.iter().enumerate() {
            x *= 2.0;
            let expect = x >= 1.0;
            if expect {
                x -= 1.0;
            }
            assert_eq!(b, expect, "bit {i}");
        }
    }

    #[test]
    fn pi4_matches_hex_expansion_of_pi() {
        // pi = 3.243F6A8885A308D313198A2E..., so pi/4 = 0.11 followed by the
        // bits of the fractional hex digits.
        let hex = "243F6A8885A308D313198A2E03707344A4093822299F31D008";
        let mut expect = vec![true, true];
        expect.extend(parse_hex(hex).unwrap());
        let got = pi_over_4_bits(expect.len() - 8);
        assert_eq!(got, expect[..got.len()]);
    }

    #[test]
    fn first_forty_bits() {
        assert_eq!(
            bits_to_string(&pi_over_4_bits(40)),
            "1100100100001111110110101010001000100001"
        );
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_bits("01 1_0\n").unwrap(), vec![false, true, true, false]);
        assert!(parse_bits("012").is_err());
        assert_eq!(parse_hex("0xA").unwrap(), vec![true, false, true, false]);
        assert!(parse_hex("0xG").is_err());
        assert!(parse_hex("").is_err());
    }
}
