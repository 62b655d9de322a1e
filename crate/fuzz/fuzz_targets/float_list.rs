#![no_main]

use forerunner_cli::config::parse_float_list;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(values) = parse_float_list(data) {
        assert!(!values.is_empty());
        assert!(values.iter().all(|v| v.is_finite()));
        assert_eq!(values.len(), data.split(',').count());
    }
});
