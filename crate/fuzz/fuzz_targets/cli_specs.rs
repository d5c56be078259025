#![no_main]
use libfuzzer_sys::fuzz_target;

use costnav_cli::{parse_axis, parse_entry};

fuzz_target!(|data: &str| {
    if let Ok(range) = parse_axis(data) {
        let _ = range.validate();
        if range.validate().is_ok() && range.steps <= 1_000_000 {
            let _ = range.values();
        }
    }
    let _ = parse_entry(data);
});
