#![no_main]
use libfuzzer_sys::fuzz_target;
use sea_core::config::parse_k_list;

fuzz_target!(|data: &str| {
    if let Ok(ks) = parse_k_list(data) {
        assert!(!ks.is_empty());
        assert!(ks.iter().all(|k| k % 2 == 1));
    }
});
