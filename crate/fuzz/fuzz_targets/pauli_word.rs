#![no_main]

use cqrac::pauli::{GeneralPauli, PauliWord};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(w) = text.parse::<PauliWord>() {
        assert_eq!(w.to_string().parse::<PauliWord>().unwrap(), w);
        assert_eq!(PauliWord::from_index(w.len(), w.index()).unwrap(), w);
    }
    if let Ok(p) = text.parse::<GeneralPauli>() {
        assert_eq!(p.to_string().parse::<GeneralPauli>().unwrap(), p);
    }
});
