#![no_main]
use libfuzzer_sys::fuzz_target;

use costnav::econ::build_report;
use costnav::fixture::Baseline;

fuzz_target!(|data: &str| {
    if let Ok(baseline) = Baseline::from_toml_str(data) {
        let _ = build_report(&baseline.inputs());
    }
});
