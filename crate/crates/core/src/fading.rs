//! Ergodic rate regions over Rayleigh block fading.
//!
//! Each realization draws `|h_r|² ~ channel_variance · Exp(1)`, orders the
//! users by instantaneous strength and evaluates every power split on the
//! grid. Powers and reported rates are indexed by physical user; the SIC
//! order follows the realization.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::csv::CsvTable;
use crate::regions::{rates_with_coefficients, simplex_grid, Assignment, Method, RatePoint, RateRegion, Scenario};
use crate::{Error, Result};

/// Realizations drawn from one generator substream.
pub const CHUNK: usize = 1024;

pub const DEFAULT_REALIZATIONS: usize = 10_000;
pub const DEFAULT_RESOLUTION: usize = 101;

#[derive(Debug, Clone, PartialEq)]
pub struct FadingConfig {
    pub realizations: usize,
    pub noise_variance: f64,
    pub channel_variance: f64,
    pub seed: u64,
    /// Delay slots follow the instantaneous strength order (slot → rank)
    /// rather than fixed physical users (slot → user).
    pub reassign_by_order: bool,
}

impl Default for FadingConfig {
    fn default() -> Self {
        Self {
            realizations: DEFAULT_REALIZATIONS,
            noise_variance: 0.1,
            channel_variance: 1.0,
            seed: 0,
            reassign_by_order: true,
        }
    }
}

impl FadingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(Error::InvalidParameter("need at least one realization".into()));
        }
        for (name, v) in [
            ("noise variance", self.noise_variance),
            ("channel variance", self.channel_variance),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Channel power gains `|h|²`, one row per realization. Chunk `c` of
/// [`CHUNK`] realizations uses stream `c` of the seeded generator, so the
/// draw does not depend on the number of worker threads.
pub fn draw_channels(config: &FadingConfig, users: usize) -> Result<Vec<Vec<f64>>> {
    config.validate()?;
    let chunks = config.realizations.div_ceil(CHUNK);
    let rows: Vec<Vec<Vec<f64>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(c as u64);
            let n = CHUNK.min(config.realizations - c * CHUNK);
            (0..n)
                .map(|_| {
                    (0..users)
                        .map(|_| {
                            let e: f64 = Exp1.sample(&mut rng);
                            config.channel_variance * e
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

#[derive(Debug, Clone)]
pub struct ErgodicRegion {
    pub region: RateRegion,
    /// Standard error of each averaged rate, aligned with the region points.
    pub std_errors: Vec<Vec<f64>>,
    pub config: FadingConfig,
    pub workers: usize,
}

impl ErgodicRegion {
    /// The region table plus one `SE<k>` column per user and the draw
    /// parameters as metadata.
    pub fn to_csv(&self) -> CsvTable {
        let base = self.region.to_csv();
        let k = self.region.users();
        let mut header = base.header.clone();
        header.extend((1..=k).map(|i| format!("SE{i}")));
        let refs: Vec<&str> = header.iter().map(String::as_str).collect();
        let mut t = CsvTable::new(&refs);
        t.meta = base.meta.clone();
        t.push_meta("seed", self.config.seed);
        t.push_meta("realizations", self.config.realizations);
        t.push_meta("noise_variance", self.config.noise_variance);
        t.push_meta("channel_variance", self.config.channel_variance);
        t.push_meta("reassign_by_order", self.config.reassign_by_order);
        t.push_meta("workers", self.workers);
        for (row, se) in base.rows.iter().zip(&self.std_errors) {
            let mut r = row.clone();
            r.extend(se);
            t.push_row(r);
        }
        t
    }
}

struct Realization {
    // rank → physical user
    order: Vec<usize>,
    sorted_sigmas: Vec<f64>,
}

/// Averages the method's rates over fading realizations at every grid
/// split. The scenario supplies the budget, pulse and delay slots; its
/// `σ` values are replaced by the drawn channels.
pub fn ergodic_region(
    template: &Scenario,
    method: Method,
    config: &FadingConfig,
    resolution: usize,
) -> Result<ErgodicRegion> {
    if resolution < 2 {
        return Err(Error::InvalidParameter("resolution must be at least 2".into()));
    }
    let k = template.users().len();
    let channels = draw_channels(config, k)?;
    let realizations: Vec<Realization> = channels
        .iter()
        .map(|h| {
            let sigmas: Vec<f64> = h.iter().map(|x| config.noise_variance / x).collect();
            let mut order: Vec<usize> = (0..k).collect();
            order.sort_by(|&a, &b| sigmas[a].total_cmp(&sigmas[b]).then(a.cmp(&b)));
            Realization {
                sorted_sigmas: order.iter().map(|&u| sigmas[u]).collect(),
                order,
            }
        })
        .collect();

    let assignments = match method {
        Method::ApNoma => Assignment::all(k),
        _ => vec![Assignment::identity(k)],
    };
    let g = template.overall_pulse();
    // coefficient matrices indexed by slot owner (rank or physical user)
    let coefficients: Vec<Vec<Vec<f64>>> = assignments
        .iter()
        .map(|a| {
            let tau = a.user_delays(template.delays());
            (0..k)
                .map(|r| {
                    (0..k)
                        .map(|j| match method {
                            Method::PNoma => 1.0,
                            Method::TNoma => 0.0,
                            Method::ApNoma => g.interference_coefficient(tau[r], tau[j]),
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    let m = resolution - 1;
    let p = template.total_power();
    let grid = simplex_grid(k, m);
    let jobs: Vec<(usize, &Vec<usize>)> = (0..assignments.len())
        .flat_map(|a| grid.iter().map(move |g| (a, g)))
        .collect();
    let n = realizations.len() as f64;
    let results: Vec<(RatePoint, Vec<f64>)> = jobs
        .par_iter()
        .map(|&(a, idx)| {
            let powers: Vec<f64> = idx.iter().map(|&i| p * i as f64 / m as f64).collect();
            let mut sum = vec![0.0; k];
            let mut sum_sq = vec![0.0; k];
            let mut sorted_powers = vec![0.0; k];
            let mut gm = vec![vec![0.0; k]; k];
            for real in &realizations {
                for (r, &u) in real.order.iter().enumerate() {
                    sorted_powers[r] = powers[u];
                }
                let gref = if config.reassign_by_order {
                    &coefficients[a]
                } else {
                    for r in 0..k {
                        for j in 0..k {
                            gm[r][j] = coefficients[a][real.order[r]][real.order[j]];
                        }
                    }
                    &gm
                };
                let rates = rates_with_coefficients(&real.sorted_sigmas, &sorted_powers, gref);
                for (r, &u) in real.order.iter().enumerate() {
                    sum[u] += rates[r];
                    sum_sq[u] += rates[r] * rates[r];
                }
            }
            let mean: Vec<f64> = sum.iter().map(|s| s / n).collect();
            let se = (0..k)
                .map(|u| {
                    if n < 2.0 {
                        0.0
                    } else {
                        let var = ((sum_sq[u] - n * mean[u] * mean[u]) / (n - 1.0)).max(0.0);
                        (var / n).sqrt()
                    }
                })
                .collect();
            (
                RatePoint {
                    powers,
                    rates: mean,
                    assignment: (method == Method::ApNoma).then_some(a),
                },
                se,
            )
        })
        .collect();
    let (points, std_errors): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    Ok(ErgodicRegion {
        region: RateRegion::from_points(method, k, assignments, points)?,
        std_errors,
        config: config.clone(),
        workers: rayon::current_num_threads(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulse::Pulse;

    fn template() -> Scenario {
        Scenario::new(&[1.0, 1.0], 10.0, &Pulse::rect(1.0).unwrap(), &[0.0, 0.5], 4).unwrap()
    }

    #[test]
    fn channels_are_reproducible_and_chunked() {
        let cfg = FadingConfig {
            realizations: 2500,
            seed: 9,
            ..Default::default()
        };
        let a = draw_channels(&cfg, 2).unwrap();
        let b = draw_channels(&cfg, 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 2500);
        // a prefix of realizations is unchanged by drawing more
        let more = draw_channels(&FadingConfig { realizations: 3000, ..cfg.clone() }, 2).unwrap();
        assert_eq!(&more[..2500], &a[..]);
        let other = draw_channels(&FadingConfig { seed: 10, ..cfg }, 2).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn exponential_mean() {
        let cfg = FadingConfig {
            realizations: 200_000,
            channel_variance: 2.0,
            ..Default::default()
        };
        let h = draw_channels(&cfg, 1).unwrap();
        let mean = h.iter().map(|r| r[0]).sum::<f64>() / h.len() as f64;
        assert!((mean - 2.0).abs() < 0.02);
    }

    #[test]
    fn invalid_config() {
        let bad = FadingConfig {
            realizations: 0,
            ..Default::default()
        };
        assert!(ergodic_region(&template(), Method::TNoma, &bad, 11).is_err());
        let bad = FadingConfig {
            noise_variance: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    /// `E[ln(1 + ρX)]` for `X ~ Exp(1)` by Simpson on a truncated range.
    fn expected_log(rho: f64) -> f64 {
        crate::numerics::quadrature::simpson_fn(|x| (1.0 + rho * x).ln() * (-x).exp(), 0.0, 60.0, 1e-3)
    }

    #[test]
    fn tnoma_corner_matches_quadrature() {
        let cfg = FadingConfig {
            realizations: 20_000,
            seed: 3,
            ..Default::default()
        };
        let er = ergodic_region(&template(), Method::TNoma, &cfg, 11).unwrap();
        let (i, corner) = er
            .region
            .points()
            .iter()
            .enumerate()
            .find(|(_, p)| p.powers == [10.0, 0.0])
            .unwrap();
        let want = 0.5 * expected_log(10.0 / 0.1) / std::f64::consts::LN_2;
        let se = er.std_errors[i][0];
        assert!((corner.rates[0] - want).abs() < 3.0 * se, "{} vs {want} (se {se})", corner.rates[0]);
    }

    #[test]
    fn csv_carries_draw_metadata() {
        let cfg = FadingConfig {
            realizations: 50,
            seed: 1,
            ..Default::default()
        };
        let er = ergodic_region(&template(), Method::ApNoma, &cfg, 11).unwrap();
        let t = er.to_csv();
        assert_eq!(t.meta("seed"), Some("1"));
        assert_eq!(t.meta("realizations"), Some("50"));
        assert!(t.header.ends_with(&["SE1".to_string(), "SE2".to_string()]));
        assert_eq!(t.rows.len(), 2 * 66);
    }
}
