#![no_main]

use lacunary_cli::parse_artifact_config;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_artifact_config(text);
    }
});
