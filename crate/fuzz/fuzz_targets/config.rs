#![no_main]

use libfuzzer_sys::fuzz_target;
use parrondoq::cli::config::parse_config;
use parrondoq::cli::settings::Settings;
use parrondoq::Error;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    match parse_config(text) {
        Ok(cfg) => {
            for entry in &cfg.entries {
                assert!(text.is_char_boundary(entry.offset));
            }
            if let Err(Error::Parse { offset, .. }) = Settings::from_config(&cfg) {
                assert!(offset <= text.len());
            }
        }
        Err(Error::Parse { offset, .. }) => assert!(offset <= text.len()),
        Err(_) => {}
    }
});
