use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// Strictly increasing Caputo orders `0 < a_1 < ... < a_n <= 2` with `a_1 < 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalOrders {
    orders: Vec<f64>,
}

impl FractionalOrders {
    pub fn new(orders: Vec<f64>) -> Result<Self> {
        let fail = |reason: &str| Error::InvalidOrders {
            orders: orders.clone(),
            reason: reason.to_string(),
        };
        if orders.is_empty() {
            return Err(fail("at least one order is required"));
        }
        if orders.iter().any(|a| !a.is_finite() || *a <= 0.0 || *a > 2.0) {
            return Err(fail("every order must lie in (0, 2]"));
        }
        if orders.windows(2).any(|w| w[0] >= w[1]) {
            return Err(fail("orders must be strictly increasing"));
        }
        if orders[0] >= 2.0 {
            return Err(fail("the smallest order must be below 2"));
        }
        Ok(Self { orders })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.orders
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    /// Largest order different from 2. Always exists because `a_1 < 2`.
    pub fn alpha_max(&self) -> f64 {
        self.orders
            .iter()
            .copied()
            .filter(|&a| a != 2.0)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `e^{i pi alpha / 2}` split into cosine and sine, exact at integer orders.
fn half_turn(alpha: f64) -> (f64, f64) {
    if alpha == 1.0 {
        (0.0, 1.0)
    } else if alpha == 2.0 {
        (-1.0, 0.0)
    } else {
        let phase = 0.5 * PI * alpha;
        (phase.cos(), phase.sin())
    }
}

/// The symbol `s = sum_k (i omega)^{a_k}` on the principal branch, together
/// with its principal square root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencySymbol {
    pub omega: f64,
    pub value: Complex64,
    pub sqrt_value: Complex64,
}

impl FrequencySymbol {
    pub fn is_zero(&self) -> bool {
        self.omega == 0.0
    }
}

pub fn compute_s(orders: &FractionalOrders, omega: f64) -> FrequencySymbol {
    let value = if omega == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        let sign = omega.signum();
        let magnitude = omega.abs();
        orders
            .as_slice()
            .iter()
            .map(|&alpha| {
                let (c, s) = half_turn(alpha);
                magnitude.powf(alpha) * Complex64::new(c, sign * s)
            })
            .sum()
    };
    FrequencySymbol {
        omega,
        value,
        sqrt_value: value.sqrt(),
    }
}

/// Hurst index together with the harmonizable-representation constant
/// `C_H = (H Gamma(2H) sin(H pi) / pi)^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HurstIndex {
    h: f64,
    c_h: f64,
}

impl HurstIndex {
    pub fn new(h: f64) -> Result<Self> {
        if !(h > 0.0 && h < 1.0) {
            return Err(Error::InvalidHurst(h));
        }
        let c_h = (h * gamma(2.0 * h) * (h * PI).sin() / PI).sqrt();
        Ok(Self { h, c_h })
    }

    pub fn value(&self) -> f64 {
        self.h
    }

    pub fn c_h(&self) -> f64 {
        self.c_h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn orders(v: &[f64]) -> FractionalOrders {
        FractionalOrders::new(v.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(FractionalOrders::new(vec![]).is_err());
        assert!(FractionalOrders::new(vec![0.3, 0.3]).is_err());
        assert!(FractionalOrders::new(vec![0.5, 0.3]).is_err());
        assert!(FractionalOrders::new(vec![0.0, 0.3]).is_err());
        assert!(FractionalOrders::new(vec![0.3, 2.1]).is_err());
        assert!(FractionalOrders::new(vec![2.0]).is_err());
        assert!(FractionalOrders::new(vec![f64::NAN]).is_err());
        assert!(FractionalOrders::new(vec![0.3, 2.0]).is_ok());
    }

    #[test]
    fn alpha_max_skips_two() {
        assert_eq!(orders(&[0.3, 1.5]).alpha_max(), 1.5);
        assert_eq!(orders(&[0.3, 1.5, 2.0]).alpha_max(), 1.5);
    }

    #[test]
    fn symbol_examples() {
        let s = compute_s(&orders(&[0.3, 1.5]), 0.0);
        assert_eq!(s.value, Complex64::new(0.0, 0.0));

        let s = compute_s(&orders(&[1.0]), 1.0);
        assert_relative_eq!(s.value.re, 0.0);
        assert_relative_eq!(s.value.im, 1.0);

        // all-two orders are rejected, so probe the a = 2 term through a
        // two-term vector and subtract the known a = 1 contribution
        let s = compute_s(&orders(&[1.0, 2.0]), 3.0);
        assert_relative_eq!(s.value.re, -9.0, epsilon = 1e-12);
        assert_relative_eq!(s.value.im, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn hurst_constant() {
        let h = HurstIndex::new(0.5).unwrap();
        assert_relative_eq!(h.c_h() * h.c_h(), 1.0 / (2.0 * PI), epsilon = 1e-14);
        assert!(HurstIndex::new(0.0).is_err());
        assert!(HurstIndex::new(1.0).is_err());
        assert!(HurstIndex::new(0.3).unwrap().c_h() > 0.0);
    }

    proptest! {
        #[test]
        fn symbol_lower_bound_and_root(
            a1 in 0.05f64..1.9,
            gap in 0.01f64..1.0,
            omega in prop::num::f64::NORMAL.prop_filter("range", |w| w.abs() > 1e-3 && w.abs() < 1e4),
        ) {
            let a2 = (a1 + gap).min(2.0);
            let ord = orders(&[a1, a2]);
            let s = compute_s(&ord, omega);
            let amax = ord.alpha_max();
            let bound = (0.5 * PI * amax).sin() * omega.abs().powf(amax);
            prop_assert!(s.value.norm() >= bound * (1.0 - 1e-12));
            prop_assert!(s.sqrt_value.re > 0.0);
            prop_assert!(s.value.norm() > 0.0);
            prop_assert!((s.sqrt_value * s.sqrt_value - s.value).norm() <= 1e-12 * s.value.norm());
        }
    }
}
