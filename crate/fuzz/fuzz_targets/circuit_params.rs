#![no_main]

use cqrac::stabilizer::{emit_qasm, CircuitParams, StabilizerState};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    let Ok(p) = text.parse::<CircuitParams>() else {
        return;
    };
    assert_eq!(p.to_string().parse::<CircuitParams>().unwrap(), p);
    if p.qubits() <= 8 {
        let state = StabilizerState::build(&p).unwrap();
        assert_eq!(state.qubits(), p.qubits());
        emit_qasm(&p, None).unwrap();
    }
});
