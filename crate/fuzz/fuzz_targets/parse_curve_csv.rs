#![no_main]

use libfuzzer_sys::fuzz_target;
use mmse_outage::curve_csv::{read_curves, write_curves};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(curves) = read_curves(text) {
        let refs: Vec<_> = curves.iter().collect();
        let again = read_curves(&write_curves(&refs)).expect("written curves re-read");
        assert_eq!(again, curves);
    }
});
