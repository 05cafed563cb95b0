use num_complex::Complex64;

use super::orders::{compute_s, FractionalOrders, FrequencySymbol};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Green function `G_omega(x, y)` of `G'' - s G = delta(x - y)` with
/// `G_x(0, y) = 0` and `G(1, y) = 0`.
pub fn green_value(orders: &FractionalOrders, omega: f64, x: f64, y: f64) -> Result<Complex64> {
    if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
        return Err(Error::OutOfDomain { x, y });
    }
    Ok(green_at(&compute_s(orders, omega), x, y))
}

/// Unchecked evaluation for a precomputed symbol; `x, y` must lie in `[0, 1]`.
///
/// The four-exponential quotient is always evaluated with `e^{2 sqrt(s)}`
/// divided out of numerator and denominator, so every exponent has a
/// non-positive real part.
pub(crate) fn green_at(symbol: &FrequencySymbol, x: f64, y: f64) -> Complex64 {
    if x == 1.0 || y == 1.0 {
        return ZERO;
    }
    if symbol.is_zero() {
        return Complex64::new(x.max(y) - 1.0, 0.0);
    }
    let r = symbol.sqrt_value;
    let sum = x + y;
    let diff = (x - y).abs();
    let numerator = (r * (sum - 2.0)).exp() + (r * (diff - 2.0)).exp()
        - (-r * sum).exp()
        - (-r * diff).exp();
    numerator / (2.0 * r * (1.0 + (-2.0 * r).exp()))
}

/// `(e^z - 1) / z`, with its Taylor series near the removable point.
fn phi1(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        Complex64::new(1.0, 0.0) + z / 2.0 + z * z / 6.0 + z * z * z / 24.0
    } else {
        (z.exp() - 1.0) / z
    }
}

/// Fourier transform `int_0^1 G_omega(0, y) e^{-i zeta y} dy` of the
/// zero-extended boundary Green function, with constants depending only on
/// `omega` precomputed.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryTransform {
    symbol: FrequencySymbol,
    // e^{-sqrt(s)}, e^{-2 sqrt(s)} and 1 + e^{-2 sqrt(s)}
    decay: Complex64,
    decay2: Complex64,
    denom: Complex64,
}

impl BoundaryTransform {
    pub fn new(symbol: FrequencySymbol) -> Self {
        let r = symbol.sqrt_value;
        let decay = (-r).exp();
        let decay2 = decay * decay;
        Self {
            symbol,
            decay,
            decay2,
            denom: 1.0 + decay2,
        }
    }

    pub fn symbol(&self) -> &FrequencySymbol {
        &self.symbol
    }

    /// `G_omega(0, 0)`; the transform behaves like `G(0,0) / (i zeta)` for
    /// large `|zeta|`.
    pub fn jump(&self) -> Complex64 {
        if self.symbol.is_zero() {
            return Complex64::new(-1.0, 0.0);
        }
        (self.decay2 - 1.0) / (self.symbol.sqrt_value * self.denom)
    }

    pub fn eval(&self, zeta: f64) -> Complex64 {
        let rotation = Complex64::new(zeta.cos(), -zeta.sin());
        self.eval_with_rotation(zeta, rotation)
    }

    /// Values at `zeta` and `-zeta`, sharing one `e^{-i zeta}`.
    pub fn eval_pair(&self, zeta: f64) -> (Complex64, Complex64) {
        let rotation = Complex64::new(zeta.cos(), -zeta.sin());
        (
            self.eval_with_rotation(zeta, rotation),
            self.eval_with_rotation(-zeta, rotation.conj()),
        )
    }

    fn eval_with_rotation(&self, zeta: f64, rotation: Complex64) -> Complex64 {
        if self.symbol.is_zero() {
            return static_transform(zeta, rotation);
        }
        let s = self.symbol.value;
        let r = self.symbol.sqrt_value;
        let quad = s + zeta * zeta;
        if quad.norm() < 1e-8 * (1.0 + s.norm()) {
            // s + zeta^2 = (r - i zeta)(r + i zeta); rewrite both partial
            // fractions through (e^z - 1)/z, which is regular at z = 0.
            let a = r - I * zeta;
            let b = r + I * zeta;
            let near = phi1(a) - a.exp() * phi1(b);
            return near / (r * (1.0 + (2.0 * r).exp()));
        }
        let numerator = 2.0 * r * self.decay * rotation - r * self.denom
            + I * zeta * (1.0 - self.decay2);
        numerator / (r * self.denom * quad)
    }
}

/// omega = 0: `int_0^1 (y - 1) e^{-i zeta y} dy = (e^{-i zeta} - 1 + i zeta) / zeta^2`.
fn static_transform(zeta: f64, rotation: Complex64) -> Complex64 {
    if zeta.abs() < 0.1 {
        // -sum_j (-i zeta)^j / (j + 2)!
        let z = -I * zeta;
        let mut term = Complex64::new(0.5, 0.0);
        let mut total = ZERO;
        for j in 0..14 {
            total += term;
            term = term * z / (j as f64 + 3.0);
        }
        -total
    } else {
        (rotation - 1.0 + I * zeta) / (zeta * zeta)
    }
}

pub fn green_hat_boundary(orders: &FractionalOrders, omega: f64, zeta: f64) -> Complex64 {
    BoundaryTransform::new(compute_s(orders, omega)).eval(zeta)
}
