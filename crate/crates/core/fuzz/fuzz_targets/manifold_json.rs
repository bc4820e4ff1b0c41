#![no_main]

use cybundle::json::{manifold_value, parse_manifold};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = parse_manifold(text) {
        let again = parse_manifold(&manifold_value(&m).to_string()).expect("emitted manifold reparses");
        assert_eq!(again, m);
        let _ = cybundle::picard::validate(&m);
    }
});
