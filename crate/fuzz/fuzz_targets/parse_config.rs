#![no_main]
use libfuzzer_sys::fuzz_target;
use sea_core::{Overrides, RunConfig};

fuzz_target!(|data: &str| {
    if let Ok(o) = Overrides::parse(data) {
        let cfg = RunConfig::resolve(Some(&o), &Overrides::default());
        let again = RunConfig::resolve(None, &Overrides::parse(&cfg.to_kv()).unwrap());
        assert_eq!(format!("{again:?}"), format!("{cfg:?}"));
        let _ = cfg.validate();
    }
});
