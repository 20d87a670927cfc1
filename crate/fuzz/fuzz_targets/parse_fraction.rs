#![no_main]

use libfuzzer_sys::fuzz_target;
use poset_rescue::rational;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Some(r) = rational::parse(text) {
            assert_eq!(rational::parse(&rational::format(&r)), Some(r));
        }
        let _ = poset_rescue_cli::parse_fraction(text);
    }
});
