#![no_main]

use libfuzzer_sys::fuzz_target;
use poset_rescue_cli::{parse_game_file, render_game_file};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(parsed) = parse_game_file(text) else { return };
    let rendered = render_game_file(&parsed);
    let again = parse_game_file(&rendered).expect("rendered documents parse");
    assert_eq!(again, parsed);
    assert_eq!(render_game_file(&again), rendered);
});
