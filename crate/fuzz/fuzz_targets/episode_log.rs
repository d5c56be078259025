#![no_main]
use libfuzzer_sys::fuzz_target;

use costnav::log::{aggregate, encode_log, parse_log_str, ReadOptions};

fuzz_target!(|data: &str| {
    for strict in [true, false] {
        let opts = ReadOptions { strict, timeout_s: 600.0 };
        if let Ok(records) = parse_log_str(data, &opts) {
            // anything accepted must survive a round trip unchanged
            let text = encode_log(&records);
            assert_eq!(parse_log_str(&text, &opts).unwrap(), records);
            if !records.is_empty() {
                aggregate(&records).unwrap();
            }
        }
    }
});
