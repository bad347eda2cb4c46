use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use fockloop::iterate::{mixed_unnormalized, run, Engine, IterationConfig};
use fockloop::oracle::oracle_single_step;
use fockloop::step::{step_coefficients, step_probability};
use fockloop::wigner::{wigner_state, GridSpec};
use fockloop::{DiagonalFockState, Efficiency, Transmittance};

fn unit() -> impl Strategy<Value = f64> {
    0.0..=1.0f64
}

fn mixture(max_len: usize) -> impl Strategy<Value = DiagonalFockState> {
    prop::collection::vec(0.0..1.0f64, 1..=max_len).prop_filter_map("nonzero weight", |w| {
        DiagonalFockState::from_weights(w)
            .ok()?
            .normalize()
            .ok()
            .map(|(s, _)| s)
    })
}

proptest! {
    #[test]
    fn coefficients_sum_to_closed_form(n in 0usize..=12, tau in unit(), eta in unit()) {
        let (t, e) = (Transmittance::new(tau).unwrap(), Efficiency::new(eta).unwrap());
        let c = step_coefficients(n, t, e);
        prop_assert!(c.weights.iter().all(|&w| w >= 0.0));
        prop_assert!((c.p_noclick.value() - step_probability(n, t, e).value()).abs() < 1e-10);
    }

    #[test]
    fn oracle_agrees_with_closed_form(n in 0usize..=6, tau in unit(), eta in unit()) {
        let (t, e) = (Transmittance::new(tau).unwrap(), Efficiency::new(eta).unwrap());
        let a = step_coefficients(n, t, e);
        let o = oracle_single_step(n, t, e).unwrap();
        prop_assert_eq!(a.weights.len(), o.weights.len());
        for (x, y) in a.weights.iter().zip(&o.weights) {
            prop_assert!((x - y).abs() < 1e-10, "{:?} vs {:?}", a.weights, o.weights);
        }
    }

    #[test]
    fn mixed_step_is_linear(
        s1 in mixture(5),
        s2 in mixture(5),
        alpha in unit(),
        tau in unit(),
        eta in unit(),
    ) {
        let (t, e) = (Transmittance::new(tau).unwrap(), Efficiency::new(eta).unwrap());
        let len = s1.probs().len().max(s2.probs().len());
        let blend: Vec<f64> = (0..len).map(|k| alpha * s1.get(k) + (1.0 - alpha) * s2.get(k)).collect();
        let mixed = mixed_unnormalized(&DiagonalFockState::from_weights(blend).unwrap(), t, e, Engine::Analytic).unwrap();
        let r1 = mixed_unnormalized(&s1, t, e, Engine::Analytic).unwrap();
        let r2 = mixed_unnormalized(&s2, t, e, Engine::Analytic).unwrap();
        for k in 0..=len {
            let expected = alpha * r1.get(k) + (1.0 - alpha) * r2.get(k);
            prop_assert!((mixed.get(k) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn run_state_invariants(n in 1usize..=8, tau in 0.01..0.99f64, eta in unit()) {
        let cfg = IterationConfig::new(n, tau, eta).unwrap();
        let r = run(&cfg).unwrap();
        prop_assert!((r.final_state.total() - 1.0).abs() < 1e-10);
        prop_assert!(r.final_state.max_support().unwrap() <= n);
        let product: f64 = r.steps.iter().map(|s| s.p_conditional.value()).product();
        prop_assert!((product - r.p_net.value()).abs() < 1e-12);
        prop_assert_eq!(r.fidelity.value(), r.final_state.get(n));
        let max_p = r.final_state.probs().iter().copied().fold(0.0, f64::max);
        prop_assert!(r.purity.value() >= max_p * max_p - 1e-15);

        // |n> is only reached through the top coefficient of every step
        let t = Transmittance::new(tau).unwrap();
        let e = Efficiency::new(eta).unwrap();
        let tops: f64 = (0..n).map(|k| step_coefficients(k, t, e).weights[k + 1]).product();
        prop_assert!((r.final_state.get(n) - tops / r.p_net.value()).abs() < 1e-10);
    }

    #[test]
    fn ideal_detector_gives_pure_target(n in 1usize..=8, tau in 0.01..0.99f64) {
        let r = run(&IterationConfig::new(n, tau, 1.0).unwrap()).unwrap();
        prop_assert_eq!(r.fidelity.value(), 1.0);
        prop_assert_eq!(r.purity.value(), 1.0);
    }

    #[test]
    fn wigner_symmetry_and_linearity(
        s1 in mixture(6),
        s2 in mixture(6),
        alpha in unit(),
    ) {
        let spec = GridSpec::square(3.0, 13);
        let g1 = wigner_state(&s1, &spec).unwrap();
        let g2 = wigner_state(&s2, &spec).unwrap();
        let len = s1.probs().len().max(s2.probs().len());
        let blend: Vec<f64> = (0..len).map(|k| alpha * s1.get(k) + (1.0 - alpha) * s2.get(k)).collect();
        let gm = wigner_state(&DiagonalFockState::from_weights(blend).unwrap(), &spec).unwrap();
        let last = spec.nx - 1;
        for i in 0..spec.nx {
            for j in 0..spec.np {
                let w = g1.at(i, j);
                prop_assert!((w - g1.at(j, i)).abs() < 1e-12);
                prop_assert!((w - g1.at(last - i, last - j)).abs() < 1e-12);
                prop_assert!((gm.at(i, j) - (alpha * w + (1.0 - alpha) * g2.at(i, j))).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn ideal_net_probability_is_product_of_step_law() {
    for n in 1..=4usize {
        let expected: f64 = (0..n)
            .map(|k| (k as f64 + 1.0) * 2f64.powi(-(k as i32) - 1))
            .product();
        let r = run(&IterationConfig::new(n, 0.5, 1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(r.p_net.value(), expected, epsilon = 1e-15);
    }
    let r = run(&IterationConfig::new(4, 0.5, 1.0).unwrap()).unwrap();
    assert_abs_diff_eq!(r.p_net.value(), 0.0234375, epsilon = 1e-15);
}

#[test]
fn net_probability_non_increasing_in_efficiency() {
    for n in 1..=5 {
        for i in 1..20 {
            let tau = i as f64 / 20.0;
            let mut prev = f64::INFINITY;
            for j in 0..=20 {
                let p = run(&IterationConfig::new(n, tau, j as f64 / 20.0).unwrap())
                    .unwrap()
                    .p_net
                    .value();
                assert!(p <= prev + 1e-12, "n={n} tau={tau} eta={}", j as f64 / 20.0);
                prev = p;
            }
        }
    }
}

#[test]
fn lossy_output_keeps_wigner_negativity() {
    let state = run(&IterationConfig::new(3, 0.5, 0.8).unwrap())
        .unwrap()
        .final_state;
    let g = wigner_state(&state, &GridSpec::default()).unwrap();
    assert!(g.min_value() < 0.0);
}

#[test]
fn wigner_normalization_up_to_six_photons() {
    for n in 0..=6 {
        let g = wigner_state(&DiagonalFockState::fock(n), &GridSpec::default()).unwrap();
        let r = fockloop::wigner::negativity(&g).unwrap();
        assert!((r.integral - 1.0).abs() < 0.02, "n={n}: {}", r.integral);
    }
}
