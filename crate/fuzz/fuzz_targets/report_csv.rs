#![no_main]
use libfuzzer_sys::fuzz_target;

use costnav::analysis::{parse_report_csv, render, Artifact, Format};

fuzz_target!(|data: &str| {
    if let Ok(report) = parse_report_csv(data) {
        let _ = render(Artifact::Report(&report), Format::Table);
        let _ = render(Artifact::Report(&report), Format::Csv);
    }
});
