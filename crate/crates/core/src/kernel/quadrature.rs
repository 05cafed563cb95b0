//! Gauss rules used by the variance-kernel integral.

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::ln_gamma;

/// Nodes and weights of a Gauss rule.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss-Jacobi rule for `int_{-1}^{1} (1 - x)^a (1 + x)^b g(x) dx`,
/// built with the Golub-Welsch eigenvalue method. Requires `a, b > -1`.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> GaussRule {
    assert!(n >= 1 && a > -1.0 && b > -1.0);
    let ab = a + b;
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let diag = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        jacobi[(k, k)] = diag;
        if k + 1 < n {
            let m = kf + 1.0;
            let t = 2.0 * m + ab;
            let beta = 4.0 * m * (m + a) * (m + b) * (m + ab) / (t * t * (t + 1.0) * (t - 1.0));
            let off = beta.sqrt();
            jacobi[(k, k + 1)] = off;
            jacobi[(k + 1, k)] = off;
        }
    }
    let mu0 = ((ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
        - ln_gamma(ab + 2.0))
    .exp();
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let v0 = eig.eigenvectors[(0, k)];
            (eig.eigenvalues[k], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    GaussRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

pub fn gauss_legendre(n: usize) -> GaussRule {
    gauss_jacobi(n, 0.0, 0.0)
}

/// Rule for `int_0^len t^power g(t) dt` with the power weight integrated
/// exactly (`power > -1`).
pub fn power_weighted(n: usize, power: f64, len: f64) -> GaussRule {
    let base = gauss_jacobi(n, 0.0, power);
    // t = len (1 + x) / 2, t^power = (len / 2)^power (1 + x)^power
    let scale = (0.5 * len).powf(power + 1.0);
    GaussRule {
        nodes: base.nodes.iter().map(|x| 0.5 * len * (1.0 + x)).collect(),
        weights: base.weights.iter().map(|w| w * scale).collect(),
    }
}

impl GaussRule {
    /// Map a rule on `[-1, 1]` onto `[lo, hi]` and integrate `g`.
    pub fn integrate(&self, lo: f64, hi: f64, mut g: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * g(mid + half * x))
            .sum::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn legendre_integrates_polynomials() {
        let rule = gauss_legendre(8);
        assert_relative_eq!(rule.weights.iter().sum::<f64>(), 2.0, epsilon = 1e-14);
        // degree 15 is exact for 8 nodes
        let got = rule.integrate(0.0, 2.0, |x| x.powi(15));
        assert_relative_eq!(got, 2f64.powi(16) / 16.0, max_relative = 1e-13);
        let got = rule.integrate(0.0, std::f64::consts::PI, f64::sin);
        assert_relative_eq!(got, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn power_weight_is_exact() {
        for &p in &[-0.4, 0.0, 0.4, 0.9] {
            let rule = power_weighted(10, p, 3.0);
            // int_0^3 t^p (1 + t^4) dt
            let got: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(t, w)| w * (1.0 + t.powi(4)))
                .sum();
            let expected = 3f64.powf(p + 1.0) / (p + 1.0) + 3f64.powf(p + 5.0) / (p + 5.0);
            assert_relative_eq!(got, expected, max_relative = 1e-12);
        }
    }
}
