#![no_main]

use libfuzzer_sys::fuzz_target;
use qex_core::report::parse_state_text;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let header = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty());
    // amplitude headers above 16 qubits allocate hundreds of megabytes
    if header.and_then(|h| h.strip_prefix('n')).and_then(|c| c.trim().parse::<usize>().ok()).is_some_and(|n| n > 16) {
        return;
    }
    let _ = parse_state_text(text);
});
