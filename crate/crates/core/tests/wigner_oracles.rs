use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2, TAU};

use cfriend::polytope::chsh;
use cfriend::tensor::{kron, BlochVector, Complex64, ComplexMatrix, DensityMatrix};
use cfriend::wigner::{
    channel_correlator, dilation_unitary, lab_map_f_amplitudes, nst_check, ots_check, run_forward,
    run_reverse, PrepMeasureRecord, ScenarioConfig,
};
use proptest::prelude::*;

fn unit_vector() -> impl Strategy<Value = BlochVector> {
    (0.0..PI, 0.0..TAU).prop_map(|(t, p)| BlochVector::from_angles(t, p))
}

fn mixed() -> DensityMatrix {
    DensityMatrix::maximally_mixed(2).unwrap()
}

/// `(I + r·σ)/2` for `|r| <= 1`.
fn qubit_state() -> impl Strategy<Value = DensityMatrix> {
    (0.0..PI, 0.0..TAU, 0.0..=1.0f64).prop_map(|(t, p, r)| {
        let v = BlochVector::from_angles(t, p);
        let [x, y, z] = v.components().map(|c| c * r);
        let m = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new((1.0 + z) / 2.0, 0.0),
                Complex64::new(x / 2.0, -y / 2.0),
                Complex64::new(x / 2.0, y / 2.0),
                Complex64::new((1.0 - z) / 2.0, 0.0),
            ],
        )
        .unwrap();
        DensityMatrix::new(m.hermitian_part()).unwrap()
    })
}

fn config(input: DensityMatrix) -> impl Strategy<Value = ScenarioConfig> {
    (unit_vector(), unit_vector(), unit_vector(), unit_vector())
        .prop_map(move |(c, a, d, b)| ScenarioConfig::new(input.clone(), c, a, d, b).unwrap())
}

#[test]
fn optimal_settings_give_the_quantum_value() {
    let behavior = run_forward(&ScenarioConfig::paper_optimal()).unwrap();
    assert!((chsh(&behavior) - 2.0 * SQRT_2).abs() < 1e-9);
    let e = behavior.correlators();
    let expected = [
        [FRAC_1_SQRT_2, FRAC_1_SQRT_2],
        [FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
    ];
    for x in 0..2 {
        for y in 0..2 {
            assert!((e[x][y] - expected[x][y]).abs() < 1e-12);
        }
    }
}

#[test]
fn lab_wave_function_amplitudes() {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let out = lab_map_f_amplitudes([h, h]);
    for (i, amp) in out.iter().enumerate() {
        let expected = if i == 0 || i == 7 { FRAC_1_SQRT_2 } else { 0.0 };
        assert!((amp - Complex64::new(expected, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn reverse_matches_forward_at_optimal_settings() {
    let config = ScenarioConfig::paper_optimal();
    let fwd = run_forward(&config).unwrap();
    let rev = run_reverse(&config).unwrap();
    assert!(fwd.max_abs_diff(&rev) < 1e-12);
}

#[test]
fn all_z_is_fully_symmetric() {
    let z = BlochVector::z_axis();
    for input in [mixed(), DensityMatrix::qubit_from_angles(1.0, 0.3).unwrap()] {
        let config = ScenarioConfig::new(input, z, z, z, z).unwrap();
        assert_eq!(run_forward(&config).unwrap(), run_reverse(&config).unwrap());
    }
}

#[test]
fn pure_input_breaks_time_symmetry() {
    // With |0><0| the first measurement's basis matters; forward and
    // reverse orderings then disagree.
    let config = ScenarioConfig::paper_optimal()
        .with_input(DensityMatrix::basis(2, 0).unwrap())
        .unwrap();
    let fwd = run_forward(&config).unwrap();
    let rev = run_reverse(&config).unwrap();
    let gap = fwd.max_abs_diff(&rev);
    assert!(gap > 0.1, "forward and reverse differ by {gap}");
    let verdict = ots_check(
        &PrepMeasureRecord::from_behavior(&fwd),
        &PrepMeasureRecord::from_behavior(&rev),
        1e-12,
    )
    .unwrap();
    assert!(!verdict.holds);
}

#[test]
fn nst_sector_examples() {
    let inside = nst_check(&ScenarioConfig::paper_optimal(), 1e-12).unwrap();
    assert!(inside.in_sector());
    let outside = nst_check(
        &ScenarioConfig::new(
            DensityMatrix::basis(2, 0).unwrap(),
            BlochVector::x_axis(),
            BlochVector::z_axis(),
            BlochVector::z_axis(),
            BlochVector::z_axis(),
        )
        .unwrap(),
        1e-12,
    )
    .unwrap();
    assert!(!outside.future_unaffected_by_past.holds);
    // Charlie's σ_x reading scrambles |0>, Alice's σ_z leaves it alone
    assert!((outside.future_unaffected_by_past.max_deviation - 0.5).abs() < 1e-12);
    assert!(outside.past_unaffected_by_future.holds);
}

#[test]
fn identical_records_are_symmetric() {
    let rec =
        PrepMeasureRecord::from_behavior(&run_forward(&ScenarioConfig::paper_optimal()).unwrap());
    assert!(ots_check(&rec, &rec, 0.0).unwrap().holds);
    assert!(
        !ots_check(&rec, &rec.perturbed(0, 0, 0, 0, 0.01), 1e-12)
            .unwrap()
            .holds
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn behavior_is_always_valid(config in qubit_state().prop_flat_map(config)) {
        let b = run_forward(&config).unwrap();
        prop_assert!(b.as_array().iter().flatten().flatten().flatten().all(|p| (0.0..=1.0 + 1e-12).contains(p)));
        prop_assert!(run_reverse(&config).is_ok());
    }

    #[test]
    fn circuit_matches_channel_oracle(config in qubit_state().prop_flat_map(config)) {
        let e = run_forward(&config).unwrap().correlators();
        for x in 0..2 {
            for y in 0..2 {
                let oracle = channel_correlator(config.first_side(x), config.second_side(y), config.input_state());
                prop_assert!((e[x][y] - oracle).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn mixed_input_correlators_are_dot_products(config in config(mixed())) {
        let e = run_forward(&config).unwrap().correlators();
        for x in 0..2 {
            for y in 0..2 {
                prop_assert!((e[x][y] - config.first_side(x).dot(config.second_side(y))).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn mixed_input_is_time_symmetric(config in config(mixed())) {
        let fwd = PrepMeasureRecord::from_behavior(&run_forward(&config).unwrap());
        let rev = PrepMeasureRecord::from_behavior(&run_reverse(&config).unwrap());
        prop_assert!(ots_check(&fwd, &rev, 1e-12).unwrap().holds);
        prop_assert!(nst_check(&config, 1e-12).unwrap().in_sector());
    }

    #[test]
    fn later_choices_never_signal_backwards(config in qubit_state().prop_flat_map(config)) {
        prop_assert!(nst_check(&config, 1e-12).unwrap().past_unaffected_by_future.holds);
    }

    #[test]
    fn dilation_rewinds_exactly(n in unit_vector(), rho in qubit_state(), mem in qubit_state()) {
        let u = dilation_unitary(&n);
        let joint = kron(rho.matrix(), mem.matrix());
        let there = u.conjugate(&joint).unwrap();
        let back = u.dagger().conjugate(&there).unwrap();
        prop_assert!(back.approx_eq(&joint, 1e-12));
        prop_assert!(u.is_unitary(1e-12).unwrap());
    }
}
