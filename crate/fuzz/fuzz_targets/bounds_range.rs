#![no_main]

use libfuzzer_sys::fuzz_target;
use qex_core::bounds::{parse_range, table_of_bounds};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(range) = parse_range(text) {
        assert!(*range.start() >= 2 && range.end() <= &64 && range.start() <= range.end());
        let rows = table_of_bounds(range).expect("valid range");
        assert!(rows.iter().all(|r| r.is_consistent()));
    }
});
