#![no_main]

use lacunary_cli::{Command, PartialConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(partial) = PartialConfig::from_json(text) {
        for command in [Command::Kernel, Command::Sweep] {
            if let Ok(config) = partial.clone().resolve(command) {
                let _ = config.validate();
            }
        }
    }
});
