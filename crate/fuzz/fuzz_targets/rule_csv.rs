#![no_main]

use lacunary_core::quadrature::QuadratureRule;
use libfuzzer_sys::fuzz_target;

// first byte picks α, the rest is the CSV text
const ALPHAS: [f64; 4] = [0.0, 0.5, 1.0, 1.5];

fuzz_target!(|data: &[u8]| {
    let Some((&pick, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let alpha = ALPHAS[pick as usize % ALPHAS.len()];
    if let Ok(rule) = QuadratureRule::from_csv(alpha, text) {
        let again = QuadratureRule::from_csv(alpha, &rule.to_csv()).expect("exported rule reparses");
        assert_eq!(again.nodes(), rule.nodes());
        assert_eq!(again.weights(), rule.weights());
    }
});
