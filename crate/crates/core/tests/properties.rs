//! Invariants that hold for every parameter choice, checked on random inputs.

use async_noma::corr::{build_R, DelayProfile};
use async_noma::numerics::{convex_hull, eigh, gram_schmidt, Matrix};
use async_noma::pulse::{OverallPulse, Pulse};
use async_noma::regions::{Assignment, EigenChannel, Method, Scenario};
use async_noma::sumrate::optimize_2user;
use proptest::prelude::*;

fn pulse_strategy() -> impl Strategy<Value = Pulse> {
    prop_oneof![
        Just(Pulse::rect(1.0).unwrap()),
        (2usize..=5).prop_map(|n| Pulse::sinc(1.0, n).unwrap()),
        (0.1f64..=1.0, 2usize..=5).prop_map(|(b, n)| Pulse::rrc(1.0, b, n).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn iui_never_exceeds_zero_offset(pulse in pulse_strategy(), tau in 0.0f64..1.0) {
        let g = OverallPulse::new(&pulse);
        prop_assert!(g.iui(tau) <= g.iui(0.0) + 1e-9);
    }

    #[test]
    fn iui_is_even_and_periodic(pulse in pulse_strategy(), tau in 0.0f64..1.0) {
        let g = OverallPulse::new(&pulse);
        let v = g.iui(tau);
        prop_assert!((g.iui(-tau) - v).abs() < 1e-12);
        prop_assert!((g.iui(tau + 1.0) - v).abs() < 1e-12);
    }

    #[test]
    fn interference_coefficient_is_symmetric(pulse in pulse_strategy(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let g = OverallPulse::new(&pulse);
        prop_assert_eq!(g.interference_coefficient(a, b), g.interference_coefficient(b, a));
        prop_assert!((g.interference_coefficient(a, b) - g.iui(a - b)).abs() < 1e-12);
    }

    #[test]
    fn correlation_matrix_is_symmetric_psd(
        pulse in pulse_strategy(),
        d in 0.05f64..0.95,
        n in 2usize..10,
    ) {
        let g = OverallPulse::new(&pulse);
        let r = build_R(&g, &DelayProfile::new(vec![0.0, d], 1.0).unwrap(), n).unwrap();
        prop_assert!(r.matrix().is_symmetric(1e-12));
        let e = r.eigen().unwrap();
        prop_assert!(e.min_value() > -1e-9);
        prop_assert!((e.values.iter().sum::<f64>() - r.matrix().trace()).abs() < 1e-9);
    }

    #[test]
    fn gram_schmidt_orthonormalizes(seed in proptest::collection::vec(-1.0f64..1.0, 16)) {
        // A Aᵀ + I is positive definite
        let a = Matrix::from_fn(4, 4, |i, j| seed[4 * i + j]);
        let mut g = a.matmul(&a.transpose()).unwrap();
        for i in 0..4 {
            g[(i, i)] += 1.0;
        }
        let gs = gram_schmidt(&g).unwrap();
        prop_assert!(gs.output_gram(&g).max_abs_diff(&Matrix::identity(4)) < 1e-10);
    }

    #[test]
    fn hull_contains_its_points(pts in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0), 4..40)) {
        let pts: Vec<Vec<f64>> = pts.into_iter().map(|(x, y, z)| vec![x, y, z]).collect();
        let h = convex_hull(&pts).unwrap();
        for p in &pts {
            prop_assert!(h.contains(p, 1e-9));
        }
    }
}

fn scenario_strategy() -> impl Strategy<Value = (Scenario, Vec<f64>)> {
    (
        pulse_strategy(),
        0.05f64..3.0,
        0.05f64..3.0,
        1.0f64..50.0,
        0.05f64..0.95,
        0.0f64..=1.0,
        0.0f64..=1.0,
    )
        .prop_map(|(pulse, s1, s2, p, d, f, u)| {
            let sc = Scenario::new(&[s1, s2], p, &pulse, &[0.0, d], 8).unwrap();
            let used = p * u;
            (sc, vec![used * f, used * (1.0 - f)])
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rates_are_ordered_pointwise((sc, powers) in scenario_strategy()) {
        // synchronous superposition sees coefficient 1; a truncated pulse can
        // exceed that, and only then may AP-NOMA fall below P-NOMA
        let g = sc.overall_pulse().interference_coefficient(sc.delays()[0], sc.delays()[1]);
        for a in Assignment::all(2) {
            let [p, ap, t] = Method::ALL.map(|m| sc.rates(m, &powers, &a).unwrap());
            for k in 0..2 {
                if g <= 1.0 {
                    prop_assert!(p[k] <= ap[k] + 1e-12);
                }
                prop_assert!(ap[k] <= t[k] + 1e-12);
            }
        }
    }

    #[test]
    fn excess_coefficient_reverses_the_first_link(s in 0.05f64..3.0, p in 1.0f64..50.0) {
        // two-lobe sinc at zero offset: G = IUI(0) > 1
        let pulse = Pulse::sinc(1.0, 2).unwrap();
        let g = OverallPulse::new(&pulse);
        prop_assume!(g.iui(0.0) > 1.0);
        let sc = Scenario::new(&[s, 2.0 * s], p, &pulse, &[0.0, 0.999_999], 8).unwrap();
        let coef = sc.overall_pulse().interference_coefficient(0.0, 0.999_999);
        prop_assume!(coef > 1.0);
        let id = Assignment::identity(2);
        let powers = [0.5 * p, 0.5 * p];
        let pn = sc.rates(Method::PNoma, &powers, &id).unwrap();
        let ap = sc.rates(Method::ApNoma, &powers, &id).unwrap();
        prop_assert!(ap[1] < pn[1]);
    }

    #[test]
    fn tnoma_ignores_pulse_and_delays((sc, powers) in scenario_strategy(), d in 0.05f64..0.95) {
        let other = Scenario::new(&sc.sigmas(), sc.total_power(), &Pulse::rect(1.0).unwrap(), &[0.0, d], 4).unwrap();
        let id = Assignment::identity(2);
        prop_assert_eq!(
            sc.rates(Method::TNoma, &powers, &id).unwrap(),
            other.rates(Method::TNoma, &powers, &id).unwrap()
        );
    }

    #[test]
    fn optimum_grows_with_budget(
        s1 in 0.05f64..3.0,
        s2 in 0.05f64..3.0,
        g in 0.02f64..0.98,
        p in 0.5f64..50.0,
        extra in 0.01f64..10.0,
    ) {
        for m in Method::ALL {
            let lo = optimize_2user(m, s1, s2, g, p).unwrap().max_sum_rate;
            let hi = optimize_2user(m, s1, s2, g, p + extra).unwrap().max_sum_rate;
            prop_assert!(hi > lo);
        }
    }

    #[test]
    fn methods_order_the_optimum(s1 in 0.05f64..3.0, s2 in 0.05f64..3.0, g in 0.02f64..0.98, p in 0.5f64..50.0) {
        let [a, b, c] = Method::ALL.map(|m| optimize_2user(m, s1, s2, g, p).unwrap().max_sum_rate);
        prop_assert!(a <= b + 1e-12 && b <= c + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Moving received power between one user's sub-channels cannot beat
    /// the equal split, by concavity of the logarithm.
    #[test]
    fn equal_eigen_split_is_optimal(
        d in 0.1f64..0.9,
        p in 1.0f64..20.0,
        weights in proptest::collection::vec(0.0f64..1.0, 8),
    ) {
        let sc = Scenario::new(&[0.3, 1.0], p, &Pulse::rect(1.0).unwrap(), &[0.0, d], 4).unwrap();
        let ch = EigenChannel::new(&sc).unwrap();
        let per_user = [0.5 * p, 0.5 * p];
        let equal = ch.equal_split(&per_user);
        let base = ch.rates(&equal).unwrap();
        // same per-user received energy, distributed by the weights
        let n = ch.block_length();
        let mut alloc = Matrix::zeros(2, n);
        for k in 0..2 {
            let w = &weights[k * n..(k + 1) * n];
            let total: f64 = w.iter().sum::<f64>().max(1e-9);
            for i in 0..n {
                alloc[(k, i)] = per_user[k] * n as f64 * w[i] / total / ch.eigenvalues(k)[i];
            }
        }
        let moved = ch.rates(&alloc).unwrap();
        for k in 0..2 {
            prop_assert!(moved[k] <= base[k] + 1e-12);
        }
    }
}

#[test]
fn eigh_matches_reconstruction_on_correlation_matrices() {
    let g = OverallPulse::new(&Pulse::rrc(1.0, 0.5, 4).unwrap());
    let r = build_R(&g, &DelayProfile::new(vec![0.0, 0.3, 0.6], 1.0).unwrap(), 6).unwrap();
    let e = eigh(r.matrix()).unwrap();
    assert!(e.reconstruct().max_abs_diff(r.matrix()) < 1e-10);
}
