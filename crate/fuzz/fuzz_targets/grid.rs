#![no_main]

use libfuzzer_sys::fuzz_target;
use parrondoq::cli::numeric::parse_grid;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(grid) = parse_grid(text) {
        assert!(grid.start < grid.stop);
        assert!(grid.count >= 2);
    }
});
