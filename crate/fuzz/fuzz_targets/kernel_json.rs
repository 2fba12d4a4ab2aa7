#![no_main]

use lacunary_core::operator::kernel_from_json;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(kernel) = kernel_from_json(text) {
        let export = serde_json::to_string(&kernel.export()).expect("exports serialize");
        kernel_from_json(&export).expect("exported kernel reparses");
    }
});
