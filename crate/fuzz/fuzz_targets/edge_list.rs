#![no_main]

use libfuzzer_sys::fuzz_target;
use qex_core::graphs::{parse_edge_list, serialize_edge_list};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = parse_edge_list(text) {
        let again = parse_edge_list(&serialize_edge_list(&g)).expect("canonical text parses");
        assert_eq!(again, g);
    }
});
