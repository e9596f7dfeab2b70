#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(ring) = biprox::fusionring::parse_fusion_text(s) {
            let _ = ring.verify_axioms();
        }
    }
});
