#![no_main]

use libfuzzer_sys::fuzz_target;
use multicover::io;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(h) = io::parse_hypergraph(text) {
        let canonical = io::serialize_hypergraph(&h);
        let again = io::parse_hypergraph(&canonical).expect("canonical form parses");
        assert_eq!(again, h);
        assert_eq!(io::serialize_hypergraph(&again), canonical);
    }
});
