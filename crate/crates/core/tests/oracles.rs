//! Cross-checks against independent implementations and statistical
//! behaviour of the fading estimator.

use async_noma::fading::{draw_channels, ergodic_region, FadingConfig};
use async_noma::numerics::{eigh, Matrix};
use async_noma::pulse::Pulse;
use async_noma::regions::{region, Method, Scenario};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn jacobi_eigenvalues_match_nalgebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in [1, 2, 5, 12, 30] {
        let a = Matrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let s = Matrix::from_fn(n, n, |i, j| a[(i, j)] + a[(j, i)]);
        let ours = eigh(&s).unwrap().values;
        let mut theirs: Vec<f64> = SymmetricEigen::new(DMatrix::from_fn(n, n, |i, j| s[(i, j)]))
            .eigenvalues
            .iter()
            .copied()
            .collect();
        theirs.sort_by(|a, b| b.total_cmp(a));
        for (x, y) in ours.iter().zip(&theirs) {
            assert!((x - y).abs() < 1e-10, "n={n}: {x} vs {y}");
        }
    }
}

fn template() -> Scenario {
    Scenario::new(&[1.0, 1.0], 10.0, &Pulse::rect(1.0).unwrap(), &[0.0, 0.5], 8).unwrap()
}

fn config(realizations: usize, seed: u64) -> FadingConfig {
    FadingConfig {
        realizations,
        seed,
        ..Default::default()
    }
}

#[test]
fn fading_is_reproducible() {
    let a = ergodic_region(&template(), Method::ApNoma, &config(3000, 4), 11).unwrap();
    let b = ergodic_region(&template(), Method::ApNoma, &config(3000, 4), 11).unwrap();
    assert_eq!(a.to_csv().to_string(), b.to_csv().to_string());
}

#[test]
fn fading_is_independent_of_thread_count() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| ergodic_region(&template(), Method::PNoma, &config(2500, 8), 11).unwrap())
    };
    let (one, four) = (run(1), run(4));
    assert_eq!(one.region.points(), four.region.points());
    assert_eq!(one.std_errors, four.std_errors);
}

#[test]
fn standard_error_shrinks_by_root_two() {
    let a = ergodic_region(&template(), Method::TNoma, &config(8000, 1), 11).unwrap();
    let b = ergodic_region(&template(), Method::TNoma, &config(16000, 1), 11).unwrap();
    for (sa, sb) in a.std_errors.iter().zip(&b.std_errors) {
        for (x, y) in sa.iter().zip(sb) {
            if *x > 0.0 {
                let ratio = x / y;
                assert!((ratio / 2f64.sqrt() - 1.0).abs() < 0.2, "ratio {ratio}");
            }
        }
    }
}

#[test]
fn one_realization_is_a_deterministic_region() {
    let cfg = FadingConfig {
        realizations: 1,
        seed: 17,
        ..Default::default()
    };
    let h = &draw_channels(&cfg, 2).unwrap()[0];
    let sigmas: Vec<f64> = h.iter().map(|x| cfg.noise_variance / x).collect();
    let fixed = Scenario::new(&sigmas, 10.0, &Pulse::rect(1.0).unwrap(), &[0.0, 0.5], 8).unwrap();
    // the deterministic region indexes users strongest first
    let strong_first = sigmas[0] <= sigmas[1];
    for method in Method::ALL {
        let er = ergodic_region(&template(), method, &cfg, 11).unwrap();
        let det = region(&fixed, method, 11).unwrap();
        assert_eq!(er.region.points().len(), det.points().len());
        for a in er.region.points() {
            let matched = det.points().iter().any(|b| {
                let (mut p, mut r) = (b.powers.clone(), b.rates.clone());
                if !strong_first {
                    p.reverse();
                    r.reverse();
                }
                p == a.powers && r.iter().zip(&a.rates).all(|(x, y)| (x - y).abs() < 1e-12)
            });
            assert!(matched, "{method}: no deterministic point for {a:?}");
        }
        assert!(er.std_errors.iter().flatten().all(|s| *s == 0.0));
    }
}
