#![no_main]

use libfuzzer_sys::fuzz_target;
use parrondoq::coins::{parse_sequence, MAX_QUBITS};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(plan) = parse_sequence(text) {
        assert!(plan.total_qubits() <= MAX_QUBITS);
        assert_eq!(plan.games().len(), plan.game_count());
        assert_eq!(plan.total_qubits(), plan.seed_count() + plan.game_count());
    }
});
