//! Symbol-level superposition coding and two-stage SIC decoding.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::csv::CsvTable;
use crate::{Error, Result};

/// Default share of the power given to the coarse layer.
pub const DEFAULT_ALPHA: f64 = 0.8;

// points closer than this are treated as the same location
const COLLISION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    labels: Vec<u32>,
    points: Vec<Complex64>,
}

impl Constellation {
    pub fn new(labelled: Vec<(u32, Complex64)>) -> Result<Self> {
        if labelled.is_empty() {
            return Err(Error::InvalidParameter("constellation is empty".into()));
        }
        let mut labels: Vec<u32> = labelled.iter().map(|(l, _)| *l).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("constellation labels must be unique".into()));
        }
        Ok(Self {
            labels: labelled.iter().map(|(l, _)| *l).collect(),
            points: labelled.iter().map(|(_, p)| *p).collect(),
        })
    }

    /// Labels `0..n` in order.
    pub fn from_points(points: Vec<Complex64>) -> Result<Self> {
        Self::new(points.into_iter().enumerate().map(|(i, p)| (i as u32, p)).collect())
    }

    /// `m`-PSK with mean power `power`, first point at angle `phase`.
    pub fn psk(m: usize, power: f64, phase: f64) -> Result<Self> {
        check_power(power)?;
        if m == 0 {
            return Err(Error::InvalidParameter("PSK order must be positive".into()));
        }
        let r = power.sqrt();
        Self::from_points(
            (0..m)
                .map(|k| Complex64::from_polar(r, phase + 2.0 * PI * k as f64 / m as f64))
                .collect(),
        )
    }

    /// Rectangular QAM on odd-integer levels (`±1, ±3, …`) scaled to mean
    /// power `power`. Labels run along I first.
    pub fn rect_qam(levels_i: usize, levels_q: usize, power: f64) -> Result<Self> {
        check_power(power)?;
        if levels_i == 0 || levels_q == 0 {
            return Err(Error::InvalidParameter("QAM needs at least one level per axis".into()));
        }
        let lv = |n: usize, k: usize| 2.0 * k as f64 - (n as f64 - 1.0);
        let raw: Vec<Complex64> = (0..levels_q)
            .flat_map(|q| (0..levels_i).map(move |i| Complex64::new(lv(levels_i, i), lv(levels_q, q))))
            .collect();
        let mean = raw.iter().map(|z| z.norm_sqr()).sum::<f64>() / raw.len() as f64;
        let s = (power / mean).sqrt();
        Self::from_points(raw.into_iter().map(|z| z * s).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn point(&self, label: u32) -> Option<Complex64> {
        self.labels.iter().position(|&l| l == label).map(|i| self.points[i])
    }

    /// Mean squared magnitude under uniform symbol selection.
    pub fn power(&self) -> f64 {
        self.points.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.len() as f64
    }

    /// Smallest distance between two distinct locations; infinite for a
    /// single location.
    pub fn min_distance(&self) -> f64 {
        let mut d = f64::INFINITY;
        for i in 0..self.len() {
            for j in 0..i {
                let e = (self.points[i] - self.points[j]).norm();
                if e > COLLISION_TOL {
                    d = d.min(e);
                }
            }
        }
        d
    }

    /// Nearest point's label; equal distances go to the lowest label.
    pub fn nearest(&self, z: Complex64) -> u32 {
        let mut best = (f64::INFINITY, u32::MAX);
        for (&l, p) in self.labels.iter().zip(&self.points) {
            let d = (z - p).norm_sqr();
            if d < best.0 || (d == best.0 && l < best.1) {
                best = (d, l);
            }
        }
        best.1
    }

    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&["label", "re", "im"])
            .with_meta("points", self.len())
            .with_meta("power", self.power());
        for (&l, p) in self.labels.iter().zip(&self.points) {
            t.push_row(vec![l as f64, p.re, p.im]);
        }
        t
    }
}

fn check_power(power: f64) -> Result<()> {
    if !(power.is_finite() && power >= 0.0) {
        return Err(Error::InvalidParameter(format!("power must be nonnegative, got {power}")));
    }
    Ok(())
}

/// Cartesian sum of two layers. Composite labels are
/// `coarse_index · |fine| + fine_index` over positions in each layer.
#[derive(Debug, Clone)]
pub struct Superposed {
    pub constellation: Constellation,
    /// Number of points that share their location with another point.
    pub collisions: usize,
    fine_len: usize,
}

impl Superposed {
    /// `(coarse position, fine position)` of a composite label.
    pub fn split_label(&self, label: u32) -> (usize, usize) {
        let l = label as usize;
        (l / self.fine_len, l % self.fine_len)
    }
}

pub fn superpose(coarse: &Constellation, fine: &Constellation) -> Superposed {
    let n = fine.len();
    let mut labelled = Vec::with_capacity(coarse.len() * n);
    for (ci, c) in coarse.points.iter().enumerate() {
        for (fi, f) in fine.points.iter().enumerate() {
            labelled.push(((ci * n + fi) as u32, c + f));
        }
    }
    let pts: Vec<Complex64> = labelled.iter().map(|(_, p)| *p).collect();
    let collisions = (0..pts.len())
        .filter(|&i| (0..pts.len()).any(|j| j != i && (pts[i] - pts[j]).norm() <= COLLISION_TOL))
        .count();
    Superposed {
        constellation: Constellation::new(labelled).expect("composite labels are unique"),
        collisions,
        fine_len: n,
    }
}

/// Coarse decision, cancellation, then fine decision on the residual.
/// Returns the layers' own labels.
pub fn sic_decode(received: Complex64, coarse: &Constellation, fine: &Constellation) -> (u32, u32) {
    let c = coarse.nearest(received);
    let residual = received - coarse.point(c).expect("decoded label exists");
    (c, fine.nearest(residual))
}

/// The two-layer example: 4-PSK at `π/4` offsets with power `α` over a
/// rectangular 8-QAM with power `1 − α`.
pub fn example_layers(alpha: f64) -> Result<(Constellation, Constellation)> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok((
        Constellation::psk(4, alpha, PI / 4.0)?,
        Constellation::rect_qam(4, 2, 1.0 - alpha)?,
    ))
}
