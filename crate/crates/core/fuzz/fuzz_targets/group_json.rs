#![no_main]

use cybundle::json::{group_value, parse_group};
use cybundle::picard::lookup;
use cybundle::rm::sufficiency_check;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = parse_group(text) {
        assert_eq!(parse_group(&group_value(&g).to_string()).expect("emitted group reparses"), g);
        let _ = sufficiency_check(&g, &lookup("P2").expect("catalog entry"));
    }
});
