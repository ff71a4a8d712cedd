#![no_main]

use cqrac::encoder::Manifest;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    let Ok(m) = Manifest::parse(text) else {
        return;
    };
    let again = Manifest::parse(&m.to_json().unwrap()).unwrap();
    assert_eq!(again, m);
    if m.n <= 6 && m.states.len() <= 64 {
        m.build_states().unwrap();
    }
});
