#![no_main]

use libfuzzer_sys::fuzz_target;
use mllnet::difftest::verdicts;
use mllnet::format::{parse_structure, ReadOptions};
use mllnet::linear::LinearOptions;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(ps) = parse_structure(text, ReadOptions { erase_atom_names: true }) else {
        return;
    };
    let opts = LinearOptions {
        instrument: true,
        ..LinearOptions::default()
    };
    let (v, defects) = verdicts(&ps, 16, opts);
    assert!(v.agree(), "{v:?}");
    assert!(defects.is_empty(), "{defects:?}");
});
