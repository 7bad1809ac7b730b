use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

use cfriend::causal::sampler::{dirichlet, sample_cf_pair, sample_rng};
use cfriend::polytope::{
    boxworld_construction, chsh, enumerate_vertices, membership, refine, signalling_check,
    simulated_chsh, tsirelson_search, tsirelson_search_in, FacetKind, MembershipCertificate,
    SearchSpace, MEMBERSHIP_TOL,
};
use cfriend::tensor::{BlochVector, DensityMatrix};
use cfriend::wigner::{run_forward, ScenarioConfig};
use cfriend::BehaviorTable;
use proptest::prelude::*;

fn quantum() -> BehaviorTable {
    run_forward(&ScenarioConfig::paper_optimal()).unwrap()
}

fn vertex_mixture(weights: &[f64; 16]) -> BehaviorTable {
    let vertices = enumerate_vertices();
    BehaviorTable::from_fn(|a, b, x, y| {
        weights
            .iter()
            .zip(&vertices)
            .map(|(w, v)| w * v.prob(a, b, x, y))
            .sum()
    })
    .unwrap()
}

fn mixed() -> DensityMatrix {
    DensityMatrix::maximally_mixed(2).unwrap()
}

#[test]
fn quantum_behavior_is_certified_outside() {
    let q = quantum();
    let cert = membership(&q, MEMBERSHIP_TOL).unwrap();
    let facet = cert.facet().expect("outside");
    assert_eq!(
        facet.kind,
        FacetKind::Chsh {
            signs: [[1, 1], [1, -1]]
        }
    );
    assert_eq!(facet.bound, 2.0);
    assert!((facet.value - 2.0 * SQRT_2).abs() < 1e-9);
    for v in enumerate_vertices() {
        let fv: f64 = facet
            .coefficients
            .iter()
            .zip(v.flatten())
            .map(|(f, p)| f * p)
            .sum();
        assert!(fv <= 2.0);
    }
}

#[test]
fn max_vertex_chsh_is_two() {
    let best = enumerate_vertices()
        .iter()
        .map(chsh)
        .fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(best, 2.0);
}

#[test]
fn boxworld_is_outside_and_signalling() {
    let (_, behavior) = boxworld_construction();
    assert_eq!(chsh(&behavior), 4.0);
    let cert = membership(&behavior, MEMBERSHIP_TOL).unwrap();
    assert_eq!(cert.facet().unwrap().value, 4.0);
    // Bob's y = 1 outcome follows x: the construction signals at the
    // level of p(a,b|x,y), Alice's side does not
    let report = signalling_check(&behavior, 1e-12);
    assert!(report.alice_independent_of_y);
    assert!(!report.bob_independent_of_x);
    assert_eq!(report.bob_deviation, 1.0);
}

#[test]
fn quantum_behavior_does_not_signal() {
    assert!(signalling_check(&quantum(), 1e-12).no_signalling());
}

#[test]
fn cf_model_behaviors_are_inside() {
    for i in 0..100 {
        let (f, _, _) = sample_cf_pair(77, i);
        let (_, behavior) = f.build().unwrap();
        let cert = membership(&behavior, MEMBERSHIP_TOL).unwrap();
        assert!(cert.is_inside(), "sample {i}: {cert:?}");
        assert!(cert.verify(&behavior, MEMBERSHIP_TOL));
    }
}

#[test]
fn optimal_settings_are_stationary() {
    let start = [0.0, FRAC_PI_2, FRAC_PI_4, -FRAC_PI_4];
    let r = refine(&mixed(), &start, 20, 0.01).unwrap();
    assert_eq!(r.angles, start.to_vec());
    assert!((r.best_s - 2.0 * SQRT_2).abs() < 1e-12);
    let h = 1e-5;
    for k in 0..4 {
        let at = |delta: f64| {
            let mut t = start;
            t[k] += delta;
            simulated_chsh(&mixed(), t.map(BlochVector::planar)).unwrap()
        };
        let grad = (at(h) - at(-h)) / (2.0 * h);
        assert!(grad.abs() < 1e-6, "coordinate {k}: {grad}");
    }
}

#[test]
fn full_sphere_search_agrees() {
    let r = tsirelson_search_in(SearchSpace::FullSphere, &mixed(), 8, 4).unwrap();
    assert!((r.best_s - 2.0 * SQRT_2).abs() < 1e-9);
}

#[test]
fn shared_axis_search_is_classical() {
    let r = tsirelson_search_in(SearchSpace::SharedAxis, &mixed(), 12, 0).unwrap();
    assert!((r.best_s - 2.0).abs() < 1e-12);
}

fn weights() -> impl Strategy<Value = [f64; 16]> {
    (any::<u64>(), 0u64..1000).prop_map(|(s, i)| dirichlet::<16>(&mut sample_rng(s, i)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vertex_mixtures_are_inside(w in weights()) {
        let p = vertex_mixture(&w);
        let cert = membership(&p, MEMBERSHIP_TOL).unwrap();
        prop_assert!(cert.is_inside());
        if let MembershipCertificate::Inside { reconstruction_error, .. } = cert {
            prop_assert!(reconstruction_error <= 1e-9);
        }
    }

    #[test]
    fn pushed_past_chsh_is_outside(w in weights()) {
        // slide from an inside point towards the PR box until S = 2 + 1e-6
        let inside = vertex_mixture(&w);
        let s0 = chsh(&inside);
        let t = (2.0 + 1e-6 - s0) / (4.0 - s0);
        let p = BehaviorTable::pr_box().mix(&inside, t).unwrap();
        let cert = membership(&p, MEMBERSHIP_TOL).unwrap();
        prop_assert!(!cert.is_inside());
        prop_assert!(cert.verify(&p, MEMBERSHIP_TOL));
    }

    #[test]
    fn chsh_is_linear(w in weights(), v in weights(), lambda in 0.0..=1.0f64) {
        let (p, q) = (vertex_mixture(&w), vertex_mixture(&v).mix(&BehaviorTable::pr_box(), 0.5).unwrap());
        let mixed = p.mix(&q, lambda).unwrap();
        prop_assert!((chsh(&mixed) - (lambda * chsh(&p) + (1.0 - lambda) * chsh(&q))).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn search_never_exceeds_tsirelson(grid in 8usize..20) {
        let r = tsirelson_search(&mixed(), grid, 3).unwrap();
        prop_assert!(r.best_s <= 2.0 * SQRT_2 + 1e-6);
        prop_assert!(r.history.windows(2).all(|w| w[0] <= w[1]));
    }
}
