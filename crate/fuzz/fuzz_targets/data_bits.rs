#![no_main]

use cqrac::encoder::data::{bits_to_string, parse_bits, parse_hex};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(bits) = parse_bits(text) {
        assert_eq!(parse_bits(&bits_to_string(&bits)).unwrap(), bits);
    }
    if let Ok(bits) = parse_hex(text) {
        assert_eq!(bits.len() % 4, 0);
    }
});
