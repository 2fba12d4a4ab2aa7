#![no_main]

use lacunary_cli::config::{parse_family, parse_m_rule};
use lacunary_cli::{parse_exponent, parse_n_grid, parse_spectrum};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_spectrum(text);
    if let Ok(grid) = parse_n_grid(text) {
        assert!(!grid.is_empty());
    }
    if let Ok(p) = parse_exponent(text) {
        assert_eq!(parse_exponent(&p.to_string()), Ok(p));
    }
    if let Ok(family) = parse_family(text) {
        assert_eq!(parse_family(&family.to_string()), Ok(family));
    }
    if let Ok(rule) = parse_m_rule(text) {
        assert_eq!(parse_m_rule(&rule.to_string()), Ok(rule));
    }
});
