#![no_main]
use libfuzzer_sys::fuzz_target;
use sea_core::{BlockGenome, CodingState};

fuzz_target!(|input: (u8, &str)| {
    let (k, text) = input;
    let Ok(w) = BlockGenome::parse(text, k as usize) else {
        return;
    };
    let x = w.decode();
    assert_eq!(x.len(), w.blocks_n());
    for s in CodingState::ALL {
        let c = w.convert(s);
        assert_eq!(c.decode(), x);
        assert_eq!(c.convert(s), c);
    }
    assert_eq!(
        BlockGenome::parse(&w.to_separated_string(), w.block_k()).unwrap(),
        w
    );
});
