#![no_main]

use forerunner_cli::config::Config;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // accepted configurations must satisfy their own range checks
    if let Ok(cfg) = Config::parse(text) {
        assert!(cfg.validate().is_ok());
    }
});
