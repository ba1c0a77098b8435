#![no_main]

use libfuzzer_sys::fuzz_target;
use qex_core::statevec::PauliTerm;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Some((a, b)) = text.split_once('|') else {
        return;
    };
    let (Ok(m), Ok(n)) = (a.parse::<PauliTerm>(), b.parse::<PauliTerm>()) else {
        return;
    };
    if let Ok(Some(ac)) = m.anticommutator(&n) {
        assert_eq!(ac.weight() % 2, (m.weight() + n.weight()) % 2);
    }
});
