#![no_main]

use libfuzzer_sys::fuzz_target;
use multicover::io;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(set) = io::parse_multiset(text) {
        let canonical = io::serialize_multiset(&set);
        assert_eq!(
            io::parse_multiset(&canonical).expect("canonical form parses"),
            set
        );
    }
});
