#![no_main]

use libfuzzer_sys::fuzz_target;
use qex_core::rational::Exact;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(x) = text.parse::<Exact>() {
        assert_eq!(x.to_string().parse::<Exact>().expect("display parses"), x);
    }
});
