#![no_main]
use libfuzzer_sys::fuzz_target;
use sea_core::BitString;

fuzz_target!(|data: &str| {
    if let Ok(bits) = data.parse::<BitString>() {
        assert_eq!(bits.len(), data.len());
        assert_eq!(bits.to_string(), data);
        assert_eq!(bits.count_ones() + bits.count_zeros(), bits.len());
        assert_eq!(bits.complement().complement(), bits);
    }
});
