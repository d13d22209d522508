//! Transmit pulses, the matched-filter output g = p * p, and the
//! inter-user interference energy it induces.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::numerics::quadrature::{simpson_fn, simpson_weights};
use crate::{Error, Result};

/// Table resolution of the overall pulse for kinds without a closed form.
pub const DEFAULT_STEPS_PER_SYMBOL: usize = 1000;

pub const DEFAULT_ROLLOFF: f64 = 0.5;
pub const DEFAULT_SIDE_LOBES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PulseKind {
    Rect,
    TruncatedSinc,
    RootRaisedCosine,
}

/// Real, even, unit-energy pulse supported on `|t| <= truncation_span / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pulse {
    kind: PulseKind,
    symbol_interval: f64,
    truncation_span: f64,
    rolloff: f64,
    side_lobes: usize,
    scale: f64,
}

impl Pulse {
    pub fn rect(symbol_interval: f64) -> Result<Self> {
        make_pulse(PulseKind::Rect, symbol_interval, None, None)
    }

    pub fn sinc(symbol_interval: f64, side_lobes: usize) -> Result<Self> {
        make_pulse(PulseKind::TruncatedSinc, symbol_interval, None, Some(side_lobes))
    }

    pub fn rrc(symbol_interval: f64, rolloff: f64, side_lobes: usize) -> Result<Self> {
        make_pulse(
            PulseKind::RootRaisedCosine,
            symbol_interval,
            Some(rolloff),
            Some(side_lobes),
        )
    }

    pub fn kind(&self) -> PulseKind {
        self.kind
    }

    pub fn symbol_interval(&self) -> f64 {
        self.symbol_interval
    }

    /// Full support width `T_p`; `g` vanishes beyond `|t| = T_p`.
    pub fn truncation_span(&self) -> f64 {
        self.truncation_span
    }

    pub fn rolloff(&self) -> f64 {
        self.rolloff
    }

    pub fn side_lobes(&self) -> usize {
        self.side_lobes
    }

    /// ISI order `u = ceil(T_p / T)`, the number of symbol intervals over
    /// which `g` is nonzero on each side.
    pub fn isi_order(&self) -> usize {
        let r = self.truncation_span / self.symbol_interval;
        // guard against r = 8.000000000000002
        (r - 1e-9).ceil().max(1.0) as usize
    }

    /// Pulse value at `t`, zero outside the support.
    pub fn eval(&self, t: f64) -> f64 {
        if t.abs() > 0.5 * self.truncation_span {
            return 0.0;
        }
        self.scale * raw_shape(self.kind, self.symbol_interval, self.rolloff, t)
    }

    pub fn energy(&self) -> f64 {
        let h = 0.5 * self.truncation_span;
        simpson_fn(|t| self.eval(t).powi(2), -h, h, self.symbol_interval / 4000.0)
    }

    pub fn spec(&self) -> PulseSpec {
        PulseSpec {
            kind: match self.kind {
                PulseKind::Rect => "rect",
                PulseKind::TruncatedSinc => "sinc",
                PulseKind::RootRaisedCosine => "rrc",
            }
            .to_string(),
            symbol_interval: self.symbol_interval,
            beta: self.rolloff,
            side_lobes: self.side_lobes,
        }
    }
}

/// Builds a pulse and scales it to unit energy. Rolloff and side lobes are
/// ignored for kinds that do not use them; missing values take the defaults
/// `0.5` and `4`.
pub fn make_pulse(
    kind: PulseKind,
    symbol_interval: f64,
    rolloff: Option<f64>,
    side_lobes: Option<usize>,
) -> Result<Pulse> {
    if !(symbol_interval.is_finite() && symbol_interval > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "symbol interval must be positive, got {symbol_interval}"
        )));
    }
    let (rolloff, side_lobes) = match kind {
        PulseKind::Rect => (0.0, 0),
        PulseKind::TruncatedSinc => (0.0, side_lobes.unwrap_or(DEFAULT_SIDE_LOBES)),
        PulseKind::RootRaisedCosine => (
            rolloff.unwrap_or(DEFAULT_ROLLOFF),
            side_lobes.unwrap_or(DEFAULT_SIDE_LOBES),
        ),
    };
    if !(0.0..=1.0).contains(&rolloff) {
        return Err(Error::InvalidParameter(format!(
            "rolloff must lie in [0, 1], got {rolloff}"
        )));
    }
    if kind != PulseKind::Rect && side_lobes == 0 {
        return Err(Error::InvalidParameter(
            "truncated pulses need at least one side lobe".into(),
        ));
    }
    let truncation_span = match kind {
        PulseKind::Rect => symbol_interval,
        _ => 2.0 * side_lobes as f64 * symbol_interval,
    };
    let mut pulse = Pulse {
        kind,
        symbol_interval,
        truncation_span,
        rolloff,
        side_lobes,
        scale: 1.0,
    };
    let energy = match kind {
        PulseKind::Rect => symbol_interval,
        _ => pulse.energy(),
    };
    pulse.scale = energy.sqrt().recip();
    Ok(pulse)
}

fn raw_shape(kind: PulseKind, t_sym: f64, beta: f64, t: f64) -> f64 {
    let x = t / t_sym;
    match kind {
        PulseKind::Rect => 1.0,
        PulseKind::TruncatedSinc => sinc(x),
        PulseKind::RootRaisedCosine => rrc_shape(beta, x),
    }
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Root raised cosine in units of `T`, with the limits at the removable
/// singularities `x = 0` and `|x| = 1/(4β)`.
fn rrc_shape(beta: f64, x: f64) -> f64 {
    if beta == 0.0 {
        return sinc(x);
    }
    if x.abs() < 1e-12 {
        return 1.0 - beta + 4.0 * beta / PI;
    }
    let q = 4.0 * beta * x;
    if (q.abs() - 1.0).abs() < 1e-9 {
        let a = PI / (4.0 * beta);
        return beta / 2f64.sqrt() * ((1.0 + 2.0 / PI) * a.sin() + (1.0 - 2.0 / PI) * a.cos());
    }
    let num = (PI * x * (1.0 - beta)).sin() + q * (PI * x * (1.0 + beta)).cos();
    num / (PI * x * (1.0 - q * q))
}

/// Structured-text form of a pulse: `{"kind": "rrc", "T": 1.0, "beta": 0.5,
/// "side_lobes": 4}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSpec {
    pub kind: String,
    #[serde(rename = "T", default = "one")]
    pub symbol_interval: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_side_lobes")]
    pub side_lobes: usize,
}

fn one() -> f64 {
    1.0
}

fn default_beta() -> f64 {
    DEFAULT_ROLLOFF
}

fn default_side_lobes() -> usize {
    DEFAULT_SIDE_LOBES
}

impl PulseSpec {
    pub fn build(&self) -> Result<Pulse> {
        let kind = match self.kind.to_ascii_lowercase().as_str() {
            "rect" => PulseKind::Rect,
            "sinc" => PulseKind::TruncatedSinc,
            "rrc" => PulseKind::RootRaisedCosine,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown pulse kind {other:?} (expected rect, sinc or rrc)"
                )))
            }
        };
        make_pulse(kind, self.symbol_interval, Some(self.beta), Some(self.side_lobes))
    }
}

/// The overall pulse `g = p * p` of a pulse, ready for repeated evaluation.
///
/// Rectangular pulses use the exact triangle. Other kinds are tabulated on
/// `[0, T_p]` by Simpson correlation of the sampled pulse and interpolated
/// with 4-point Lagrange stencils kept inside the table.
#[derive(Debug, Clone)]
pub struct OverallPulse {
    pulse: Pulse,
    table: Option<Table>,
}

#[derive(Debug, Clone)]
struct Table {
    step: f64,
    values: Vec<f64>,
}

impl OverallPulse {
    pub fn new(pulse: &Pulse) -> Self {
        match pulse.kind {
            PulseKind::Rect => Self {
                pulse: pulse.clone(),
                table: None,
            },
            _ => Self::tabulated(pulse, DEFAULT_STEPS_PER_SYMBOL),
        }
    }

    /// Forces the numerical path, `steps_per_symbol` samples per `T`.
    pub fn tabulated(pulse: &Pulse, steps_per_symbol: usize) -> Self {
        assert!(steps_per_symbol >= 2, "steps_per_symbol must be at least 2");
        let step = pulse.symbol_interval / steps_per_symbol as f64;
        let n = (pulse.truncation_span / step).round() as usize;
        let half = 0.5 * pulse.truncation_span;
        let samples: Vec<f64> = (0..=n).map(|j| pulse.eval(-half + j as f64 * step)).collect();
        // g(k h) = ∫ p(s) p(s - k h) ds over the n - k overlapping intervals
        let values = (0..=n)
            .map(|k| {
                let w = simpson_weights(n - k, step);
                (k..=n)
                    .zip(&w)
                    .map(|(j, wj)| wj * samples[j] * samples[j - k])
                    .sum()
            })
            .collect();
        Self {
            pulse: pulse.clone(),
            table: Some(Table { step, values }),
        }
    }

    pub fn pulse(&self) -> &Pulse {
        &self.pulse
    }

    /// Table spacing, `None` for the closed form.
    pub fn grid_step(&self) -> Option<f64> {
        self.table.as_ref().map(|t| t.step)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let t = t.abs();
        let span = self.pulse.truncation_span;
        if t >= span {
            return 0.0;
        }
        match &self.table {
            None => (1.0 - t / self.pulse.symbol_interval).max(0.0),
            Some(table) => table.interpolate(t),
        }
    }

    /// `IUI(τ) = Σ_i g(τ + iT)²` over every `i` with `|τ + iT| <= T_p`.
    pub fn iui(&self, tau: f64) -> f64 {
        let t_sym = self.pulse.symbol_interval;
        let span = self.pulse.truncation_span;
        let lo = ((-span - tau) / t_sym).ceil() as i64;
        let hi = ((span - tau) / t_sym).floor() as i64;
        (lo..=hi)
            .map(|i| self.eval(tau + i as f64 * t_sym).powi(2))
            .sum()
    }

    /// `G_rk = Σ_{i=-u}^{u} g(iT + τ_r - τ_k)²`. Depends on `|τ_r - τ_k|`
    /// only, so it is exactly symmetric in its arguments.
    pub fn interference_coefficient(&self, tau_r: f64, tau_k: f64) -> f64 {
        let d = (tau_r - tau_k).abs();
        let u = self.pulse.isi_order() as i64;
        let t_sym = self.pulse.symbol_interval;
        (-u..=u)
            .map(|i| self.eval(i as f64 * t_sym + d).powi(2))
            .sum()
    }
}

impl Table {
    fn interpolate(&self, t: f64) -> f64 {
        let last = self.values.len() - 1;
        let x = t / self.step;
        let i = x.floor() as usize;
        if i >= last {
            return self.values[last];
        }
        let start = i.saturating_sub(1).min(last.saturating_sub(3));
        let nodes = start..(start + 4).min(last + 1);
        let mut acc = 0.0;
        for j in nodes.clone() {
            let mut l = 1.0;
            for m in nodes.clone() {
                if m != j {
                    l *= (x - m as f64) / (j as f64 - m as f64);
                }
            }
            acc += l * self.values[j];
        }
        acc
    }
}

/// `g(t)` for a single query. Builds the overall pulse on every call; use
/// [`OverallPulse`] to evaluate repeatedly.
pub fn autocorrelation(pulse: &Pulse, t: f64) -> f64 {
    OverallPulse::new(pulse).eval(t)
}

pub fn iui(pulse: &Pulse, tau: f64) -> f64 {
    OverallPulse::new(pulse).iui(tau)
}

pub fn interference_coefficient(pulse: &Pulse, tau_r: f64, tau_k: f64) -> f64 {
    OverallPulse::new(pulse).interference_coefficient(tau_r, tau_k)
}
