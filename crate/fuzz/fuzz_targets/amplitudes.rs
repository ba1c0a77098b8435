#![no_main]

use libfuzzer_sys::fuzz_target;
use qex_core::statevec::{parse_amplitudes, serialize_amplitudes};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // keep allocations small: the header alone can request 2^26 amplitudes
    if text.len() > 4096 || declared_qubits(text).is_some_and(|n| n > 16) {
        return;
    }
    if let Ok(psi) = parse_amplitudes(text) {
        if psi.n() <= 12 {
            let again = parse_amplitudes(&serialize_amplitudes(&psi)).expect("serialized state parses");
            assert_eq!(again.n(), psi.n());
        }
    }
});

fn declared_qubits(text: &str) -> Option<usize> {
    let header = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())?;
    header.strip_prefix('n')?.trim().parse().ok()
}
