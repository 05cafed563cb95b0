use crate::error::{Error, Result};

/// Solve the `M x M` system with diagonal `beta`, off-diagonals `-1` and
/// first row `(beta, -2)` by the Thomas algorithm.
pub fn tridiag_solve(beta: f64, rhs: &[f64]) -> Result<Vec<f64>> {
    let m = rhs.len();
    if m < 2 {
        return Err(Error::LengthMismatch {
            what: "tridiagonal right-hand side (at least 2 rows)",
            expected: 2,
            found: m,
        });
    }
    let tiny = 1e-300;
    let mut upper = vec![0.0; m];
    let mut x = vec![0.0; m];
    if beta.abs() < tiny {
        return Err(Error::ZeroPivot { row: 0 });
    }
    upper[0] = -2.0 / beta;
    x[0] = rhs[0] / beta;
    for i in 1..m {
        let pivot = beta + upper[i - 1];
        if pivot.abs() < tiny {
            return Err(Error::ZeroPivot { row: i });
        }
        upper[i] = -1.0 / pivot;
        x[i] = (rhs[i] + x[i - 1]) / pivot;
    }
    for i in (0..m - 1).rev() {
        x[i] -= upper[i] * x[i + 1];
    }
    Ok(x)
}

/// `A x` for the same matrix; used for residual checks.
#[cfg(test)]
pub(crate) fn tridiag_apply(beta: f64, x: &[f64]) -> Vec<f64> {
    let m = x.len();
    (0..m)
        .map(|i| {
            let left = if i > 0 { x[i - 1] } else { 0.0 };
            let right = if i + 1 < m { x[i + 1] } else { 0.0 };
            let right_weight = if i == 0 { 2.0 } else { 1.0 };
            beta * x[i] - left - right_weight * right
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn recovers_ones() {
        let beta = 2.3;
        let ones = vec![1.0; 50];
        let b = tridiag_apply(beta, &ones);
        let x = tridiag_solve(beta, &b).unwrap();
        for v in x {
            assert_relative_eq!(v, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn three_by_three_against_elimination() {
        // [3 -2 0; -1 3 -1; 0 -1 3] x = [1 0 0]; Cramer's rule by hand:
        // det = 3(9-1) + 2(-3) = 18, x = (8, 3, 1) / 18
        let x = tridiag_solve(3.0, &[1.0, 0.0, 0.0]).unwrap();
        assert_relative_eq!(x[0], 8.0 / 18.0, epsilon = 1e-15);
        assert_relative_eq!(x[1], 3.0 / 18.0, epsilon = 1e-15);
        assert_relative_eq!(x[2], 1.0 / 18.0, epsilon = 1e-15);
    }

    #[test]
    fn rejects_short_system() {
        assert!(tridiag_solve(3.0, &[1.0]).is_err());
    }

    #[test]
    fn zero_pivot_reported() {
        assert!(matches!(tridiag_solve(0.0, &[1.0, 1.0]), Err(Error::ZeroPivot { row: 0 })));
    }

    proptest! {
        #[test]
        fn small_residual(extra in 1e-6f64..10.0, rhs in prop::collection::vec(-1e3f64..1e3, 2..200)) {
            let beta = 2.0 + extra;
            let x = tridiag_solve(beta, &rhs).unwrap();
            let back = tridiag_apply(beta, &x);
            let scale = rhs.iter().fold(0.0f64, |a, b| a.max(b.abs())).max(1e-300);
            let resid = back.iter().zip(&rhs).fold(0.0f64, |a, (p, q)| a.max((p - q).abs()));
            prop_assert!(resid <= 1e-10 * scale, "{resid} vs {scale}");
        }
    }
}
