//! Sum-rate maximizing power splits: closed forms for two users and a
//! simplex grid search for any number of users.

use rayon::prelude::*;

use crate::csv::CsvTable;
use crate::regions::{simplex_grid, Assignment, Method, Scenario};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SumRateResult {
    pub method: Method,
    pub total_power: f64,
    /// Optimal power per user, in the caller's user order.
    pub powers: Vec<f64>,
    pub max_sum_rate: f64,
    /// Every user gets strictly positive power.
    pub fairness_flag: bool,
    /// The optimum is not unique: every split achieves it. Only set for
    /// P-NOMA with equal channels, where the reported split is the equal one.
    pub split_family: bool,
    /// Interference coefficient used, AP-NOMA only.
    pub g: Option<f64>,
}

fn half_log2(x: f64) -> f64 {
    0.5 * x.log2()
}

fn check_inputs(method: Method, s1: f64, s2: f64, g: f64, p: f64) -> Result<()> {
    for (name, v) in [("sigma1", s1), ("sigma2", s2), ("P", p)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
        }
    }
    if method == Method::ApNoma && !(g > 0.0 && g <= 1.0) {
        return Err(Error::InvalidParameter(format!("g must lie in (0, 1], got {g}")));
    }
    Ok(())
}

/// Two-user sum rate with the stronger user (smaller `σ`) decoded free of
/// interference and the weaker seeing `g` times the stronger user's power.
/// `g` is forced to 1 for P-NOMA and 0 for T-NOMA.
pub fn sum_rate_2user(method: Method, s1: f64, s2: f64, g: f64, p1: f64, p2: f64) -> f64 {
    let g = match method {
        Method::PNoma => 1.0,
        Method::ApNoma => g,
        Method::TNoma => 0.0,
    };
    let (ss, sw, ps, pw) = if s1 <= s2 { (s1, s2, p1, p2) } else { (s2, s1, p2, p1) };
    half_log2(1.0 + ps / ss) + half_log2(1.0 + pw / (g * ps + sw))
}

/// Channel-gap test: true when the optimum powers both users,
/// `|σ₁ − σ₂|` below `0`, `(1 − g)P` and `P` for P-, AP- and T-NOMA.
pub fn fairness_threshold(method: Method, s1: f64, s2: f64, g: f64, p: f64) -> bool {
    let gap = (s1 - s2).abs();
    match method {
        Method::PNoma => false,
        Method::ApNoma => gap < (1.0 - g) * p,
        Method::TNoma => gap < p,
    }
}

/// Closed-form optimal split for two users.
///
/// The AP-NOMA stationary point is the positive root of
/// `g(g−1)x² + 2(g−1)σ_w x + P(σ_w − gσ_s) + σ_w(σ_w − σ_s) = 0` with `x`
/// the stronger user's power; it is clamped to `[0, P]`.
pub fn optimize_2user(method: Method, s1: f64, s2: f64, g: f64, p: f64) -> Result<SumRateResult> {
    check_inputs(method, s1, s2, g, p)?;
    if method == Method::ApNoma && g == 1.0 {
        let mut r = optimize_2user(Method::PNoma, s1, s2, g, p)?;
        r.method = Method::ApNoma;
        r.g = Some(1.0);
        return Ok(r);
    }
    let (ss, sw) = if s1 <= s2 { (s1, s2) } else { (s2, s1) };
    let mut split_family = false;
    // power of the stronger user
    let strong = match method {
        Method::PNoma => {
            if s1 == s2 {
                split_family = true;
                0.5 * p
            } else {
                p
            }
        }
        Method::ApNoma => apnoma_stationary_point(ss, sw, g, p).clamp(0.0, p),
        Method::TNoma => (0.5 * (p + sw - ss)).clamp(0.0, p),
    };
    let weak = p - strong;
    let (p1, p2) = if s1 <= s2 { (strong, weak) } else { (weak, strong) };
    Ok(SumRateResult {
        method,
        total_power: p,
        powers: vec![p1, p2],
        max_sum_rate: sum_rate_2user(method, s1, s2, g, p1, p2),
        fairness_flag: p1 > 0.0 && p2 > 0.0,
        split_family,
        g: (method == Method::ApNoma).then_some(g),
    })
}

/// Positive root `(−σ_w + √(σ_w² + g/(1−g)·A)) / g` with
/// `A = P(σ_w − gσ_s) + σ_w(σ_w − σ_s)`, for `σ_s ≤ σ_w` and `0 < g < 1`.
pub fn apnoma_stationary_point(ss: f64, sw: f64, g: f64, p: f64) -> f64 {
    let a = p * (sw - g * ss) + sw * (sw - ss);
    let disc = sw * sw + g / (1.0 - g) * a;
    // rationalized form of (−σ_w + √disc)/g, free of cancellation for small g
    (a / (1.0 - g)) / (sw + disc.sqrt())
}

/// The stationarity polynomial in the stronger user's power.
pub fn stationarity_residual(ss: f64, sw: f64, g: f64, p: f64, x: f64) -> f64 {
    g * (g - 1.0) * x * x + 2.0 * (g - 1.0) * sw * x + p * (sw - g * ss) + sw * (sw - ss)
}

/// Closed-form optimum at each budget of `p_grid`.
pub fn sweep_sumrate(method: Method, s1: f64, s2: f64, g: f64, p_grid: &[f64]) -> Result<Vec<SumRateResult>> {
    if p_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("power grid must be strictly ascending".into()));
    }
    p_grid
        .par_iter()
        .map(|&p| optimize_2user(method, s1, s2, g, p))
        .collect()
}

/// Curve table with one row per (budget, method).
pub fn sweep_to_csv(results: &[SumRateResult]) -> CsvTable {
    let mut t = CsvTable::new(&[
        "P_linear",
        "P_dB",
        "method",
        "P1_opt",
        "P2_opt",
        "sum_rate",
        "fairness_flag",
    ])
    .with_meta("method_codes", "1:pnoma;2:apnoma;3:tnoma");
    for r in results {
        let code = match r.method {
            Method::PNoma => 1.0,
            Method::ApNoma => 2.0,
            Method::TNoma => 3.0,
        };
        t.push_row(vec![
            r.total_power,
            10.0 * r.total_power.log10(),
            code,
            r.powers[0],
            r.powers[1],
            r.max_sum_rate,
            if r.fairness_flag { 1.0 } else { 0.0 },
        ]);
    }
    t
}

/// Exhaustive search over the power simplex with `resolution` points per
/// axis; AP-NOMA also maximizes over delay assignments. Powers are
/// reported in the scenario's sorted (strongest-first) user order.
pub fn optimize_grid(scenario: &Scenario, method: Method, resolution: usize) -> Result<SumRateResult> {
    let k = scenario.users().len();
    if k < 2 {
        return Err(Error::InvalidParameter("grid search needs at least two users".into()));
    }
    if resolution < 2 {
        return Err(Error::InvalidParameter("resolution must be at least 2".into()));
    }
    let m = resolution - 1;
    let p = scenario.total_power();
    let assignments = match method {
        Method::ApNoma => Assignment::all(k),
        _ => vec![Assignment::identity(k)],
    };
    // only full-budget splits: leftover power never lowers the sum rate
    let grid: Vec<Vec<usize>> = simplex_grid(k - 1, m)
        .into_iter()
        .map(|mut v| {
            let used: usize = v.iter().sum();
            v.push(m - used);
            v
        })
        .collect();
    let best = grid
        .par_iter()
        .map(|idx| -> Result<(f64, Vec<f64>)> {
            let powers: Vec<f64> = idx.iter().map(|&i| p * i as f64 / m as f64).collect();
            let mut best = f64::NEG_INFINITY;
            for a in &assignments {
                let s: f64 = scenario.rates(method, &powers, a)?.iter().sum();
                best = best.max(s);
            }
            Ok((best, powers))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        // first maximum in grid order
        .fold(None::<(f64, Vec<f64>)>, |acc, cur| match acc {
            Some(a) if a.0 >= cur.0 => Some(a),
            _ => Some(cur),
        })
        .expect("grid is never empty");
    let fairness_flag = best.1.iter().all(|&x| x > 0.0);
    Ok(SumRateResult {
        method,
        total_power: p,
        powers: best.1,
        max_sum_rate: best.0,
        fairness_flag,
        split_family: false,
        g: None,
    })
}

/// Interference-free optimum `P_k = max(0, μ − σ_k)` with `Σ P_k = P`.
pub fn water_filling(sigmas: &[f64], p: f64) -> Result<Vec<f64>> {
    if sigmas.is_empty() || sigmas.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(Error::InvalidParameter("sigmas must be positive".into()));
    }
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidParameter(format!("P must be positive, got {p}")));
    }
    let mut sorted = sigmas.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut mu = 0.0;
    for n in (1..=sorted.len()).rev() {
        mu = (p + sorted[..n].iter().sum::<f64>()) / n as f64;
        if mu > sorted[n - 1] {
            break;
        }
    }
    Ok(sigmas.iter().map(|s| (mu - s).max(0.0)).collect())
}
