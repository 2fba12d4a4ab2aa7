#![no_main]

use lacunary_core::polyspace::{polynomial_from_json, polynomial_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = polynomial_from_json(text) {
        let again = polynomial_from_json(&polynomial_to_json(&f).to_string()).expect("exported polynomial reparses");
        assert_eq!(polynomial_to_json(&again), polynomial_to_json(&f));
    }
});
