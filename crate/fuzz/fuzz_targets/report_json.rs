#![no_main]

use libfuzzer_sys::fuzz_target;
use qex_core::report::{to_json, Report};

fuzz_target!(|data: &[u8]| {
    if let Ok(report) = serde_json::from_slice::<Report>(data) {
        let again: Report = serde_json::from_str(&to_json(&report)).expect("emitted report parses");
        assert_eq!(again.schema_version, report.schema_version);
        assert_eq!(again.marginals.len(), report.marginals.len());
    }
});
