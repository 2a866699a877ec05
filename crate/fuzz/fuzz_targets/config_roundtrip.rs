#![no_main]

use fdelab::cli::parse_config;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(cfg) = parse_config(data) {
        let again = parse_config(cfg.render().as_bytes()).expect("rendered config must parse");
        assert_eq!(again, cfg);
    }
});
