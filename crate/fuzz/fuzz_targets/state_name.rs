#![no_main]

use libfuzzer_sys::fuzz_target;
use qex_core::named::named_state;

fuzz_target!(|data: &[u8]| {
    if data.len() > 64 {
        return;
    }
    if let Ok(name) = std::str::from_utf8(data) {
        let _ = named_state(name);
    }
});
