#![no_main]

use libfuzzer_sys::fuzz_target;

use k3check::exactring::{format_rational, parse_rational};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // must never panic on arbitrary input; anything accepted must survive
    // a format round-trip unchanged
    if let Ok(value) = parse_rational(text) {
        let shown = format_rational(&value);
        let back = parse_rational(&shown).expect("canonical form reparses");
        assert_eq!(back, value);
    }
});
