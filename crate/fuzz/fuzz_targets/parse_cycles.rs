#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = biprox::permgroup::parse_cycle_notation(s, None);
        let _ = biprox::permgroup::parse_cycle_notation(s, Some(6));
    }
});
