#![no_main]

use libfuzzer_sys::fuzz_target;

use k3check::report::Report;

fuzz_target!(|data: &[u8]| {
    // decoding untrusted report JSON must never panic, and any accepted
    // report must round-trip
    if let Ok(report) = serde_json::from_slice::<Report>(data) {
        let text = serde_json::to_string(&report).expect("reports serialize");
        let back: Report = serde_json::from_str(&text).expect("serialized reports reparse");
        assert_eq!(back, report);
    }
});
