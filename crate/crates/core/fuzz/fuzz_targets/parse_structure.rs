#![no_main]

use libfuzzer_sys::fuzz_target;
use mllnet::format::{parse_structure, to_json, ReadOptions};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for opts in [ReadOptions::default(), ReadOptions { erase_atom_names: true }] {
        if let Ok(ps) = parse_structure(text, opts) {
            let json = to_json(&ps);
            let again = parse_structure(&json, opts).expect("written structures parse");
            assert_eq!(to_json(&again), json);
        }
    }
});
