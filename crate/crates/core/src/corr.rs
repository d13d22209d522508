//! Correlation structure of delayed superposed streams: the block matrix R
//! of matched-filter cross samples, its matrix-valued generating function
//! R(w), and transmit power.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::csv::CsvTable;
use crate::numerics::{eigh, EigenDecomposition, Matrix};
use crate::pulse::OverallPulse;
use crate::{Error, Result};

/// Per-user symbol offsets, distinct and within `[0, T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayProfile {
    delays: Vec<f64>,
}

impl DelayProfile {
    pub fn new(delays: Vec<f64>, symbol_interval: f64) -> Result<Self> {
        if delays.is_empty() {
            return Err(Error::InvalidParameter("delay profile needs K >= 1".into()));
        }
        for &d in &delays {
            if !(d.is_finite() && (0.0..symbol_interval).contains(&d)) {
                return Err(Error::InvalidParameter(format!(
                    "delay {d} outside [0, {symbol_interval})"
                )));
            }
        }
        for (i, a) in delays.iter().enumerate() {
            if delays[..i].contains(a) {
                return Err(Error::DegenerateProfile(format!("delay {a} appears twice")));
            }
        }
        Ok(Self { delays })
    }

    pub fn len(&self) -> usize {
        self.delays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delays.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.delays
    }
}

/// The `KN × KN` matrix with blocks `R_lk(m, n) = g((m - n)T + τ_l - τ_k)`,
/// indexed user-major (`row = l·N + m`).
#[derive(Debug, Clone)]
pub struct CorrBlockMatrix {
    users: usize,
    block_length: usize,
    band: usize,
    delays: Vec<f64>,
    matrix: Matrix,
}

impl CorrBlockMatrix {
    pub fn users(&self) -> usize {
        self.users
    }

    pub fn block_length(&self) -> usize {
        self.block_length
    }

    /// Entries vanish for `|m - n| > band`.
    pub fn band(&self) -> usize {
        self.band
    }

    pub fn delays(&self) -> &[f64] {
        &self.delays
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn block(&self, l: usize, k: usize) -> Matrix {
        let n = self.block_length;
        Matrix::from_fn(n, n, |i, j| self.matrix[(l * n + i, k * n + j)])
    }

    pub fn eigen(&self) -> Result<EigenDecomposition> {
        eigh(&self.matrix)
    }

    /// Row-major dump with the shape and delays as metadata.
    pub fn to_csv(&self) -> CsvTable {
        let dim = self.matrix.rows();
        let names: Vec<String> = (0..dim).map(|j| format!("c{j}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut t = CsvTable::new(&refs)
            .with_meta("K", self.users)
            .with_meta("N", self.block_length)
            .with_meta("u", self.band)
            .with_meta("delays", join(&self.delays));
        for i in 0..dim {
            t.push_row(self.matrix.row(i).to_vec());
        }
        t
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

#[allow(non_snake_case)]
pub fn build_R(g: &OverallPulse, delays: &DelayProfile, block_length: usize) -> Result<CorrBlockMatrix> {
    if block_length == 0 {
        return Err(Error::InvalidParameter("block length must be positive".into()));
    }
    let t_sym = g.pulse().symbol_interval();
    let k = delays.len();
    let n = block_length;
    let tau = delays.as_slice();
    let matrix = Matrix::from_fn(k * n, k * n, |r, c| {
        let (l, m) = (r / n, r % n);
        let (kk, j) = (c / n, c % n);
        g.eval((m as f64 - j as f64) * t_sym + tau[l] - tau[kk])
    });
    Ok(CorrBlockMatrix {
        users: k,
        block_length: n,
        band: g.pulse().isi_order(),
        delays: tau.to_vec(),
        matrix,
    })
}

/// `w ↦ R(w)` with `f_lk(w) = Σ_j g(jT + τ_l - τ_k) e^{ijw}`.
#[derive(Debug, Clone)]
pub struct GeneratingMatrix {
    g: OverallPulse,
    delays: Vec<f64>,
}

pub fn generating_matrix(g: &OverallPulse, delays: &DelayProfile) -> GeneratingMatrix {
    GeneratingMatrix {
        g: g.clone(),
        delays: delays.as_slice().to_vec(),
    }
}

impl GeneratingMatrix {
    pub fn users(&self) -> usize {
        self.delays.len()
    }

    pub fn entry(&self, l: usize, k: usize, w: f64) -> Complex64 {
        let t_sym = self.g.pulse().symbol_interval();
        let span = self.g.pulse().truncation_span();
        let d = self.delays[l] - self.delays[k];
        let lo = ((-span - d) / t_sym).ceil() as i64;
        let hi = ((span - d) / t_sym).floor() as i64;
        (lo..=hi)
            .map(|j| Complex64::from_polar(self.g.eval(j as f64 * t_sym + d), j as f64 * w))
            .sum()
    }

    pub fn eval(&self, w: f64) -> Vec<Vec<Complex64>> {
        let k = self.users();
        (0..k)
            .map(|l| (0..k).map(|m| self.entry(l, m, w)).collect())
            .collect()
    }

    /// Eigenvalues of the Hermitian `R(w)`, descending. Uses the real
    /// symmetric embedding `[[A, -B], [B, A]]`, whose spectrum is that of
    /// `A + iB` with every value doubled.
    pub fn eigenvalues(&self, w: f64) -> Result<Vec<f64>> {
        let h = self.eval(w);
        let k = self.users();
        let mut m = Matrix::from_fn(2 * k, 2 * k, |r, c| {
            let z = h[r % k][c % k];
            match (r < k, c < k) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        });
        // the embedding of a Hermitian matrix is symmetric up to rounding
        for r in 0..2 * k {
            for c in 0..r {
                let s = 0.5 * (m[(r, c)] + m[(c, r)]);
                m[(r, c)] = s;
                m[(c, r)] = s;
            }
        }
        let e = eigh(&m)?;
        Ok(e.values.iter().step_by(2).copied().collect())
    }
}

fn w_grid(size: usize) -> impl Iterator<Item = f64> {
    (0..size).map(move |k| TAU * k as f64 / size as f64)
}

/// `(max_w λ_max(R(w)), min_w λ_min(R(w)))` over a uniform grid on
/// `[0, 2π)`; the limits of the extreme eigenvalues of `R_N` as `N → ∞`.
pub fn szego_extremes(gen: &GeneratingMatrix, grid_size: usize) -> Result<(f64, f64)> {
    if grid_size < 16 {
        return Err(Error::InvalidParameter(format!(
            "w-grid needs at least 16 points, got {grid_size}"
        )));
    }
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for w in w_grid(grid_size) {
        let ev = gen.eigenvalues(w)?;
        hi = hi.max(ev[0]);
        lo = lo.min(*ev.last().unwrap());
    }
    Ok((hi, lo))
}

/// `(1/2π) ∫ Σ_j λ_j(R(w)) dw` by the trapezoid rule on a periodic grid;
/// the limit of `(1/N) Σ λ(R_N)`.
pub fn spectral_mean(gen: &GeneratingMatrix, grid_size: usize) -> Result<f64> {
    if grid_size < 16 {
        return Err(Error::InvalidParameter(format!(
            "w-grid needs at least 16 points, got {grid_size}"
        )));
    }
    let mut acc = 0.0;
    for w in w_grid(grid_size) {
        acc += gen.eigenvalues(w)?.iter().sum::<f64>();
    }
    Ok(acc / grid_size as f64)
}

/// `trace(RQ)`, the energy per block of the delayed superposition when the
/// stacked symbol vector has covariance `Q`.
pub fn transmit_power(r: &CorrBlockMatrix, q: &Matrix) -> Result<f64> {
    let m = r.matrix();
    if q.rows() != m.rows() || q.cols() != m.cols() {
        return Err(Error::Shape(format!(
            "Q is {}x{}, R is {}x{}",
            q.rows(),
            q.cols(),
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += m[(i, j)] * q[(j, i)];
        }
    }
    Ok(acc)
}
