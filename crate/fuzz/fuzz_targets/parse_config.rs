#![no_main]

use fdelab::cli::parse_config;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Err(e) = parse_config(data) {
        // reported lines must exist in the input
        if let Some(line) = e.line {
            let lines = data.split(|&b| b == b'\n').count();
            assert!(line >= 1 && line <= lines);
        }
    }
});
