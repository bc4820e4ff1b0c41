#![no_main]

use cybundle::json::{fan_value, parse_fan};
use cybundle::toric::{check_smooth_complete, cox_data};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = parse_fan(text) {
        assert_eq!(parse_fan(&fan_value(&f).to_string()).expect("emitted fan reparses"), f);
        // Keep the expensive checks to small fans.
        if f.dim() <= 4 && f.ray_count() <= 8 && f.max_cones().len() <= 16 {
            if check_smooth_complete(&f).passes() {
                let cox = cox_data(&f).expect("accepted fans have Cox data");
                assert_eq!(cox.class_group.free_rank(), f.ray_count() - f.dim());
            }
        }
    }
});
