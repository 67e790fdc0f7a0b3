use num_complex::Complex64;
use proptest::prelude::*;

use parrondoq::cli::config::parse_config;
use parrondoq::cli::numeric::{parse_angle, parse_fraction, parse_grid};
use parrondoq::coins::{build_unitary, parse_sequence, BCoinParams, CoinParams, GameConfig};
use parrondoq::engine::{final_state, payoff, Layout, PayoffConvention};
use parrondoq::noise::{apply_channel, ChannelKind, NoiseSpec};
use parrondoq::tensor::{dagger, matmul, ComplexMatrix};

use std::f64::consts::{PI, TAU};

fn coin() -> impl Strategy<Value = CoinParams> {
    (-PI..=PI, 0.0..=TAU, 0.0..=TAU).prop_map(|(t, g, d)| CoinParams::new(t, g, d).unwrap())
}

fn game() -> impl Strategy<Value = GameConfig> {
    (coin(), [coin(), coin(), coin(), coin()]).prop_map(|(coin_a, coins)| GameConfig {
        epsilon: 0.0,
        coin_a,
        coin_b: BCoinParams { coins },
    })
}

fn channel() -> impl Strategy<Value = ChannelKind> {
    prop_oneof![
        Just(ChannelKind::AmplitudeDamping),
        Just(ChannelKind::Depolarizing),
        Just(ChannelKind::PhaseDamping),
        Just(ChannelKind::None),
    ]
}

fn sequence() -> impl Strategy<Value = &'static str> {
    prop_oneof![
        Just("A"),
        Just("B"),
        Just("AAB"),
        Just("AB"),
        Just("BAB"),
        Just("B^3"),
        Just("(AB)^2")
    ]
}

fn matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim)
        .prop_map(|v| ComplexMatrix::from_vec(v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compiled_sequences_are_unitary(cfg in game(), seq in sequence()) {
        let u = build_unitary(&parse_sequence(seq).unwrap(), &cfg).unwrap();
        let id = ComplexMatrix::identity(u.dim()).unwrap();
        prop_assert!(matmul(&u, &dagger(&u)).unwrap().max_abs_diff(&id) < 1e-12);
    }

    #[test]
    fn adjoint_reverses_products(a in matrix(4), b in matrix(4)) {
        let lhs = dagger(&matmul(&a, &b).unwrap());
        let rhs = matmul(&dagger(&b), &dagger(&a)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn channels_preserve_trace_and_positivity(kind in channel(), p in 0.0f64..=1.0, cfg in game()) {
        let plan = parse_sequence("AAB").unwrap();
        let rho = final_state(&plan, &cfg, &NoiseSpec::noiseless()).unwrap();
        let spec = if kind == ChannelKind::None { NoiseSpec::noiseless() } else { NoiseSpec::new(kind, p).unwrap() };
        let out = apply_channel(&rho, &spec).unwrap();
        prop_assert!((out.trace() - 1.0).norm() < 1e-12);
        prop_assert!(out.check().is_ok());
    }

    #[test]
    fn payoff_is_bounded_by_mask_size(cfg in game(), seq in sequence(), kind in channel(), p in 0.0f64..=1.0) {
        let plan = parse_sequence(seq).unwrap();
        let spec = if kind == ChannelKind::None { NoiseSpec::noiseless() } else { NoiseSpec::new(kind, p).unwrap() };
        let rho = final_state(&plan, &cfg, &spec).unwrap();
        for conv in PayoffConvention::candidates() {
            let r = payoff(&rho, &conv, Layout::from(&plan)).unwrap();
            prop_assert!(r.payoff.abs() <= plan.total_qubits() as f64 + 1e-12);
            prop_assert!(r.per_qubit.iter().all(|s| s.abs() <= 1.0 + 1e-12));
        }
    }

    #[test]
    fn evaluation_is_deterministic(cfg in game(), seq in sequence(), kind in channel(), p in 0.0f64..=1.0) {
        let plan = parse_sequence(seq).unwrap();
        let spec = if kind == ChannelKind::None { NoiseSpec::noiseless() } else { NoiseSpec::new(kind, p).unwrap() };
        let a = final_state(&plan, &cfg, &spec).unwrap();
        let b = final_state(&plan, &cfg, &spec).unwrap();
        prop_assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn parsers_never_panic(text in "\\PC{0,24}") {
        let _ = parse_sequence(&text);
        let _ = parse_angle(&text);
        let _ = parse_fraction(&text);
        let _ = parse_grid(&text);
        let _ = parse_config(&text);
    }

    #[test]
    fn grammar_shaped_input_never_panics(text in "[AB()^0-9]{0,16}") {
        if let Ok(plan) = parse_sequence(&text) {
            prop_assert!(plan.total_qubits() <= parrondoq::coins::MAX_QUBITS);
            prop_assert!(plan.game_count() >= 1);
        }
    }
}
