#![no_main]

use cqrac::context::ContextRecord;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|line: &str| {
    let _ = ContextRecord::parse_line(line);
});
