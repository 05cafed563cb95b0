use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Symmetric positive semidefinite estimate of `f f^T` with its
/// eigenpairs sorted by decreasing eigenvalue.
#[derive(Debug, Clone)]
pub struct LiftedMatrix {
    x: DMatrix<f64>,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

pub(crate) fn sorted_eigen(x: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(x.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(x.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

impl LiftedMatrix {
    /// Symmetrizes `x` and checks semidefiniteness to `1e-10 ||X||`.
    pub fn new(x: DMatrix<f64>) -> Result<Self> {
        if x.nrows() != x.ncols() || x.nrows() == 0 {
            return Err(Error::LengthMismatch {
                what: "square lifted matrix",
                expected: x.nrows(),
                found: x.ncols(),
            });
        }
        let asym = (&x - x.transpose()).amax();
        if asym > 1e-10 * x.amax().max(f64::MIN_POSITIVE) {
            return Err(Error::invalid("X", format!("not symmetric (max |X - X^T| = {asym:e})")));
        }
        let x = (&x + x.transpose()) * 0.5;
        let (eigenvalues, eigenvectors) = sorted_eigen(&x);
        let floor = -1e-10 * x.norm();
        if let Some(&min) = eigenvalues.last() {
            if min < floor {
                return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
            }
        }
        Ok(Self {
            x,
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn trace(&self) -> f64 {
        self.x.trace()
    }

    /// Whether the top two eigenvalues coincide, so the leading
    /// eigenvector (and the extracted signal) is not unique.
    pub fn leading_is_degenerate(&self) -> bool {
        match self.eigenvalues.as_slice() {
            [a, b, ..] => (a - b).abs() <= 1e-10 * a.abs().max(f64::MIN_POSITIVE),
            _ => false,
        }
    }

    /// `lambda_1 / sum lambda_i`; 1 for an exactly rank-one matrix.
    pub fn leading_fraction(&self) -> f64 {
        let total: f64 = self.eigenvalues.iter().map(|v| v.max(0.0)).sum();
        if total > 0.0 {
            self.eigenvalues[0].max(0.0) / total
        } else {
            0.0
        }
    }
}

/// `|sqrt(lambda_1) v_1|` entrywise.
pub fn extract_signal(x: &LiftedMatrix) -> Vec<f64> {
    let lead = x.eigenvalues[0].max(0.0).sqrt();
    x.eigenvectors.column(0).iter().map(|v| (lead * v).abs()).collect()
}
