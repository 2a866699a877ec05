#![no_main]

use fdelab::cli::Scenario;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|name: &str| {
    if let Ok(s) = name.parse::<Scenario>() {
        assert_eq!(s.as_str().parse::<Scenario>().unwrap(), s);
    }
});
