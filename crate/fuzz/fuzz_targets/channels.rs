#![no_main]

use libfuzzer_sys::fuzz_target;
use parrondoq::cli::settings::parse_channels;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(list) = parse_channels(text) {
        assert_eq!(list.len(), text.split(',').count());
    }
});
