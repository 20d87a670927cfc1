#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(parsed) = poset_rescue_cli::parse_game_file(text) {
            // Accepted games must satisfy the model checks the solvers rely on.
            assert!(parsed.game.model().is_valid());
        }
    }
});
