#![no_main]
use libfuzzer_sys::fuzz_target;

use costnav_cli::RunConfig;

fuzz_target!(|data: &str| {
    let _ = RunConfig::from_toml_str(data);
});
