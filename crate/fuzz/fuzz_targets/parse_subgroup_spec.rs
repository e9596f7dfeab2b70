#![no_main]
use biprox::permgroup::FiniteGroup;
use libfuzzer_sys::fuzz_target;
use std::sync::OnceLock;

fn s4() -> &'static FiniteGroup {
    static G: OnceLock<FiniteGroup> = OnceLock::new();
    G.get_or_init(|| biprox::catalog::lookup("S4").unwrap().build().unwrap())
}

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = biprox::catalog::parse_subgroup_spec(s4(), s);
    }
});
