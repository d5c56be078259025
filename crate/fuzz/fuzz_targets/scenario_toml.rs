#![no_main]
use libfuzzer_sys::fuzz_target;

use costnav::sim::ScenarioFile;

fuzz_target!(|data: &str| {
    if let Ok(file) = ScenarioFile::from_toml_str(data) {
        if let Ok((scenario, policy)) = file.resolve(None) {
            assert!(scenario.validate().is_ok());
            assert!(policy.validate().is_ok());
        }
    }
});
