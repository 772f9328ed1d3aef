use ndarray::{Array1, Array2};
use ndarray_linalg::{Eig, EigVals, Solve};
use num_complex::Complex64;

use super::operator::LinearOperator;
use crate::error::{LabError, Result};

/// Eigenvalues of a dense real matrix, with optional eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenSet {
    pub values: Vec<Complex64>,
    /// Column `i` belongs to `values[i]`.
    pub vectors: Option<Array2<Complex64>>,
    /// Largest measured `|Mv - λv| / |v|` when vectors were computed,
    /// otherwise the backward-error estimate `n u |M|_F`.
    pub residual_bound: f64,
}

impl EigenSet {
    pub fn vector(&self, i: usize) -> Option<Vec<Complex64>> {
        self.vectors.as_ref().map(|v| v.column(i).to_vec())
    }
}

pub fn dense_eigs(op: &LinearOperator, want_vectors: bool) -> Result<EigenSet> {
    eigs_of_matrix(op.matrix(), want_vectors)
}

/// Full spectrum of a square real matrix through LAPACK `dgeev`.
pub fn eigs_of_matrix(m: &Array2<f64>, want_vectors: bool) -> Result<EigenSet> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(LabError::Config(format!(
            "eigensolve needs a square matrix, got {}x{}",
            n,
            m.ncols()
        )));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(LabError::NumericalFailure {
            dim: n,
            reason: "non-finite matrix entries".into(),
        });
    }
    let fail = |e: ndarray_linalg::error::LinalgError| LabError::NumericalFailure {
        dim: n,
        reason: e.to_string(),
    };
    if want_vectors {
        let (vals, vecs) = m.eig().map_err(fail)?;
        let mc = m.mapv(|v| Complex64::new(v, 0.0));
        let mut worst = 0.0f64;
        for (i, lam) in vals.iter().enumerate() {
            let v = vecs.column(i);
            let r = mc.dot(&v) - v.mapv(|z| z * lam);
            let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let nr = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nv > 0.0 {
                worst = worst.max(nr / nv);
            }
        }
        Ok(EigenSet {
            values: vals.to_vec(),
            vectors: Some(vecs),
            residual_bound: worst,
        })
    } else {
        let vals = m.eigvals().map_err(fail)?;
        let fro = m.iter().map(|v| v * v).sum::<f64>().sqrt();
        Ok(EigenSet {
            values: vals.to_vec(),
            vectors: None,
            residual_bound: n as f64 * f64::EPSILON * fro,
        })
    }
}

/// Eigenvalues of the symmetric part of `m`, ascending.
///
/// Goes through the general solver: with the system LAPACK it is faster than
/// the symmetric driver at the sizes used here.
pub fn symmetric_eigenvalues(m: &Array2<f64>) -> Result<Vec<f64>> {
    let sym = 0.5 * (m + &m.t());
    let mut v: Vec<f64> = eigs_of_matrix(&sym, false)?
        .values
        .iter()
        .map(|z| z.re)
        .collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Eigenvector for a real eigenvalue near `shift` by shifted inverse iteration.
///
/// Returns the normalized vector and its Rayleigh-quotient estimate.
pub fn inverse_iteration(
    m: &Array2<f64>,
    shift: f64,
    iterations: usize,
) -> Result<(Vec<f64>, f64)> {
    let n = m.nrows();
    let mut a = m.clone();
    // Offset the shift slightly so the factorization stays regular even when
    // `shift` is accurate to machine precision.
    let s = shift + 1e-10 * shift.abs().max(1.0);
    for i in 0..n {
        a[[i, i]] -= s;
    }
    let mut x = Array1::from_iter((0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64));
    x /= x.dot(&x).sqrt();
    for _ in 0..iterations.max(1) {
        let y = a.solve(&x).map_err(|e| LabError::NumericalFailure {
            dim: n,
            reason: e.to_string(),
        })?;
        let norm = y.dot(&y).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(LabError::NumericalFailure {
                dim: n,
                reason: "inverse iteration diverged".into(),
            });
        }
        x = y / norm;
    }
    let mx = m.dot(&x);
    Ok((x.to_vec(), x.dot(&mx)))
}

/// Largest distance from an eigenvalue to the nearest conjugate of another.
pub fn conjugate_defect(values: &[Complex64]) -> f64 {
    values
        .iter()
        .map(|z| {
            values
                .iter()
                .map(|w| (w - z.conj()).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}
