#![no_main]

use cybundle::bundles::obstruction_check;
use cybundle::json::{bundle_value, parse_bundle};
use cybundle::picard::lookup;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let base = lookup("curveG2").expect("catalog entry");
    for b in [parse_bundle(text, Some(&base)), parse_bundle(text, None)].into_iter().flatten() {
        let again = parse_bundle(&bundle_value(&b).to_string(), Some(b.base())).expect("emitted bundle reparses");
        assert_eq!(bundle_value(&again), bundle_value(&b));
        if b.group().coordinate_count() <= 8 && b.base().pic_group().coordinate_count() <= 8 {
            let _ = obstruction_check(&b);
        }
    }
});
