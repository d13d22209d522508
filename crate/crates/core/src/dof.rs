//! Time-limited sinc families: their Gram matrices and the Gram-Schmidt
//! extension of an integer-shift family by one fractionally shifted sinc.

use crate::csv::CsvTable;
use crate::numerics::quadrature::simpson_fn;
use crate::numerics::{gram_schmidt, GramSchmidt, Matrix};
use crate::{Error, Result};

/// Inner products use Simpson steps no longer than this many `T`.
pub const QUADRATURE_STEP: f64 = 1e-3;

/// Sincs `√(2W) sinc(2W(t − c_n))`, each truncated to a window of length
/// `N·T` centred on its own peak.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedBasisSet {
    centers: Vec<f64>,
    bandwidth: f64,
    window: f64,
}

impl TruncatedBasisSet {
    /// `count` sincs at `0, T, …, (count − 1)T` with `T = 1/(2W)` and window
    /// length `window_symbols · T`.
    pub fn integer_shifts(count: usize, bandwidth: f64, window_symbols: f64) -> Result<Self> {
        if !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(Error::InvalidParameter(format!("bandwidth must be positive, got {bandwidth}")));
        }
        let t = 0.5 / bandwidth;
        Self::new(
            (0..count).map(|n| n as f64 * t).collect(),
            bandwidth,
            window_symbols * t,
        )
    }

    pub fn new(centers: Vec<f64>, bandwidth: f64, window: f64) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::InvalidParameter("basis set is empty".into()));
        }
        if !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(Error::InvalidParameter(format!("bandwidth must be positive, got {bandwidth}")));
        }
        if !(window.is_finite() && window > 0.0) {
            return Err(Error::InvalidParameter(format!("window must be positive, got {window}")));
        }
        Ok(Self {
            centers,
            bandwidth,
            window,
        })
    }

    /// Five unit-spaced sincs with `W = 1/2` and a `5T` window.
    pub fn example() -> Self {
        Self::integer_shifts(5, 0.5, 5.0).expect("valid constants")
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn symbol_interval(&self) -> f64 {
        0.5 / self.bandwidth
    }

    /// `[start, end]` of function `n`'s window.
    pub fn support(&self, n: usize) -> (f64, f64) {
        let c = self.centers[n];
        (c - 0.5 * self.window, c + 0.5 * self.window)
    }

    pub fn eval(&self, n: usize, t: f64) -> f64 {
        let (lo, hi) = self.support(n);
        if t < lo || t > hi {
            return 0.0;
        }
        let x = 2.0 * self.bandwidth * (t - self.centers[n]);
        let s = if x == 0.0 {
            1.0
        } else {
            (std::f64::consts::PI * x).sin() / (std::f64::consts::PI * x)
        };
        (2.0 * self.bandwidth).sqrt() * s
    }

    fn inner(&self, i: usize, j: usize) -> f64 {
        let (a0, a1) = self.support(i);
        let (b0, b1) = self.support(j);
        let (lo, hi) = (a0.max(b0), a1.min(b1));
        if hi <= lo {
            return 0.0;
        }
        simpson_fn(
            |t| self.eval(i, t) * self.eval(j, t),
            lo,
            hi,
            QUADRATURE_STEP * self.symbol_interval(),
        )
    }

    fn with_extra(&self, center: f64) -> Self {
        let mut s = self.clone();
        s.centers.push(center);
        s
    }
}

/// Windowed inner products `⟨p_i, p_j⟩`.
pub fn gram_matrix(basis: &TruncatedBasisSet) -> Matrix {
    let n = basis.len();
    let mut g = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = basis.inner(i, j);
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

/// A basis set plus one extra function, orthonormalized in order.
#[derive(Debug, Clone)]
pub struct ExtendedBasis {
    functions: TruncatedBasisSet,
    gram: Matrix,
    gs: GramSchmidt,
}

/// Appends `√(2W) sinc(2W(t − τ))` (with the same window length) and runs
/// Gram-Schmidt on the augmented set.
pub fn extend_basis(basis: &TruncatedBasisSet, extra_shift: f64) -> Result<ExtendedBasis> {
    let functions = basis.with_extra(extra_shift);
    let gram = gram_matrix(&functions);
    let gs = gram_schmidt(&gram)?;
    Ok(ExtendedBasis {
        functions,
        gram,
        gs,
    })
}

impl ExtendedBasis {
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn functions(&self) -> &TruncatedBasisSet {
        &self.functions
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn orthonormalization(&self) -> &GramSchmidt {
        &self.gs
    }

    /// `c_j` in `p'_n = p_n + Σ_{j<n} c_j e_j` (zero-based `n`).
    pub fn step_coefficients(&self, n: usize) -> Vec<f64> {
        self.gs.step_coefficients(n)
    }

    /// Gram matrix of the orthonormalized functions.
    pub fn output_gram(&self) -> Matrix {
        self.gs.output_gram(&self.gram)
    }

    /// `e_j(t)` as a combination of the input functions.
    pub fn eval_orthonormal(&self, j: usize, t: f64) -> f64 {
        self.gs
            .basis
            .row(j)
            .iter()
            .enumerate()
            .map(|(i, c)| c * self.functions.eval(i, t))
            .sum()
    }

    /// `‖p_n − Σ_j ⟨p_n, e_j⟩ e_j‖` evaluated through the Gram matrix.
    pub fn reconstruction_error(&self, n: usize) -> f64 {
        let k = self.len();
        let mut u = vec![0.0; k];
        u[n] = 1.0;
        for j in 0..k {
            let c = self.gs.projections[(n, j)];
            for (ui, bi) in u.iter_mut().zip(self.gs.basis.row(j)) {
                *ui -= c * bi;
            }
        }
        let gu = self.gram.mul_vec(&u).expect("square gram");
        u.iter().zip(&gu).map(|(a, b)| a * b).sum::<f64>().max(0.0).sqrt()
    }

    /// Rows `n = 2, …, K` (one-based) of step coefficients, zero-padded to
    /// `K − 1` columns.
    pub fn coefficients_csv(&self) -> CsvTable {
        let k = self.len();
        let names: Vec<String> = std::iter::once("n".to_string())
            .chain((1..k).map(|j| format!("c{j}")))
            .collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut t = CsvTable::new(&refs).with_meta("functions", k);
        for n in 1..k {
            let mut row = vec![(n + 1) as f64];
            let c = self.step_coefficients(n);
            row.extend((0..k - 1).map(|j| c.get(j).copied().unwrap_or(0.0)));
            t.push_row(row);
        }
        t
    }
}

pub fn gram_csv(gram: &Matrix) -> CsvTable {
    let names: Vec<String> = (1..=gram.cols()).map(|j| format!("p{j}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut t = CsvTable::new(&refs).with_meta("rows", gram.rows());
    for i in 0..gram.rows() {
        t.push_row(gram.row(i).to_vec());
    }
    t
}
