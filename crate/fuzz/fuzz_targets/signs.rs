#![no_main]

use libfuzzer_sys::fuzz_target;
use patchwork_core::phase::SignDistribution;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let tokens: Vec<&str> = s.split(',').map(str::trim).collect();
    if let Ok(signs) = SignDistribution::parse(&tokens) {
        assert_eq!(signs.minus.len(), tokens.len());
        assert_eq!(SignDistribution::parse(&signs.to_strings()).unwrap(), signs);
        assert_eq!(signs.flipped().flipped(), signs);
    }
});
