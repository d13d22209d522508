use super::Matrix;
use crate::{Error, Result};

/// Relative squared-norm threshold below which a residual counts as zero.
const DEPENDENCE_TOL: f64 = 1e-10;

/// Orthonormalisation of `n` abstract vectors described by their Gram
/// matrix `G[i][j] = ⟨p_i, p_j⟩`.
///
/// The output basis is expressed in the input vectors:
/// `e_j = Σ_i basis[(j, i)] · p_i`.
#[derive(Debug, Clone)]
pub struct GramSchmidt {
    /// Row `j` holds the expansion of `e_j` over the inputs.
    pub basis: Matrix,
    /// `projections[(n, j)] = ⟨p_n, e_j⟩` for `j < n`; the diagonal holds
    /// `‖p'_n‖`, the norm of the residual before normalisation.
    pub projections: Matrix,
}

impl GramSchmidt {
    /// Coefficients in the form `p'_n = p_n + Σ_j c_j e_j`, i.e. the
    /// negated projections removed at step `n`.
    pub fn step_coefficients(&self, n: usize) -> Vec<f64> {
        (0..n).map(|j| -self.projections[(n, j)]).collect()
    }

    /// Gram matrix of the output set under the input Gram matrix.
    pub fn output_gram(&self, gram: &Matrix) -> Matrix {
        let b = &self.basis;
        &(b * gram) * &b.transpose()
    }

    pub fn len(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Gram-Schmidt with one re-orthogonalisation pass per step.
///
/// Fails with [`Error::Dependence`] when a residual's squared norm falls
/// below `1e-10` times the squared norm of its input vector.
pub fn gram_schmidt(gram: &Matrix) -> Result<GramSchmidt> {
    if !gram.is_square() {
        return Err(Error::Shape("Gram matrix must be square".into()));
    }
    if !gram.is_symmetric(1e-12 * (1.0 + gram.trace().abs())) {
        return Err(Error::Shape("Gram matrix must be symmetric".into()));
    }
    let n = gram.rows();
    let inner = |u: &[f64], v: &[f64]| -> f64 {
        let gv = gram.mul_vec(v).expect("dimensions checked");
        u.iter().zip(&gv).map(|(a, b)| a * b).sum()
    };

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut proj = Matrix::zeros(n, n);
    for k in 0..n {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        let mut coeffs = vec![0.0; k];
        for _pass in 0..2 {
            let c: Vec<f64> = basis.iter().map(|e| inner(&v, e)).collect();
            for (j, e) in basis.iter().enumerate() {
                for (vi, ei) in v.iter_mut().zip(e) {
                    *vi -= c[j] * ei;
                }
                coeffs[j] += c[j];
            }
        }
        let norm2 = inner(&v, &v);
        if norm2 <= DEPENDENCE_TOL * gram[(k, k)].abs() || norm2 <= 0.0 {
            return Err(Error::Dependence { index: k });
        }
        let norm = norm2.sqrt();
        for (j, c) in coeffs.into_iter().enumerate() {
            proj[(k, j)] = c;
        }
        proj[(k, k)] = norm;
        basis.push(v.into_iter().map(|x| x / norm).collect());
    }
    Ok(GramSchmidt {
        basis: Matrix::from_rows(&basis)?,
        projections: proj,
    })
}
