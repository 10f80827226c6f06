#![no_main]

use libfuzzer_sys::fuzz_target;
use mllnet::formula::Formula;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(f) = Formula::parse(text) {
        // printing and re-parsing is the identity
        assert_eq!(Formula::parse(&f.to_string()).as_ref(), Ok(&f));
        assert_eq!(f.negate().negate(), f);
    }
    let _ = Formula::parse_erasing_names(text);
});
