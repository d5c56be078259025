#![no_main]
use libfuzzer_sys::fuzz_target;

use costnav::analysis::parse_curve_csv;

fuzz_target!(|data: &str| {
    let _ = parse_curve_csv(data);
});
