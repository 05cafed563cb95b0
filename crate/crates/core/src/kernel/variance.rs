use std::f64::consts::PI;

use super::green::{green_at, BoundaryTransform};
use super::orders::{compute_s, FractionalOrders, FrequencySymbol, HurstIndex};
use super::quadrature::{gauss_legendre, power_weighted};
use crate::error::{Error, Result};

/// Discretization of the `zeta` integral defining `R(omega)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Truncation point `Z` of the `zeta` integral. The integrand beyond it
    /// is replaced by its leading `|G(0,0)|^2 zeta^{-1-2H}` asymptote.
    pub tail_cutoff: f64,
    /// Gauss-Legendre panels per length `pi` at refinement level zero.
    pub panels: usize,
    /// End of the panel `[0, split]` on which the `zeta^{1-2H}` weight is
    /// integrated exactly.
    pub singularity_split: f64,
    /// Relative agreement required between successive refinements.
    pub tolerance: f64,
    pub max_refinements: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            tail_cutoff: 1e4,
            panels: 2,
            singularity_split: 1.0,
            tolerance: 1e-8,
            max_refinements: 6,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.tail_cutoff > 1.0) {
            return Err(Error::invalid("tail_cutoff", "must exceed 1"));
        }
        if self.panels < 2 {
            return Err(Error::invalid("panels", "must be at least 2"));
        }
        if !(self.singularity_split > 0.0 && self.singularity_split < self.tail_cutoff) {
            return Err(Error::invalid(
                "singularity_split",
                "must lie strictly between 0 and tail_cutoff",
            ));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::invalid("tolerance", "must be positive"));
        }
        Ok(())
    }
}

/// Variance kernel
/// `R(omega) = C_H^2 int_R |G^_omega(0, zeta)|^2 |zeta|^{1-2H} d zeta`,
/// i.e. the second moment of `int_0^1 G_omega(0, y) dB^H(y)`.
///
/// `|G^(zeta)|` is not even in `zeta` once `omega != 0` (the boundary Green
/// function is complex), so both half-lines are folded onto `[0, inf)`
/// explicitly.
pub fn compute_r(
    orders: &FractionalOrders,
    omega: f64,
    hurst: HurstIndex,
    quad: &QuadratureSpec,
) -> Result<f64> {
    quad.validate()?;
    let transform = BoundaryTransform::new(compute_s(orders, omega));
    let h = hurst.value();
    let power = 1.0 - 2.0 * h;
    let folded = |zeta: f64| {
        let (plus, minus) = transform.eval_pair(zeta);
        plus.norm_sqr() + minus.norm_sqr()
    };

    // keep the cutoff well past the scale |sqrt(s)| where the transform
    // turns over into its 1/zeta tail
    let cutoff = quad
        .tail_cutoff
        .max(100.0 * transform.symbol().sqrt_value.norm());
    let split = quad.singularity_split;
    let tail = transform.jump().norm_sqr() * cutoff.powf(-2.0 * h) / h;
    let legendre = gauss_legendre(16);
    let c2 = hurst.c_h() * hurst.c_h();

    let mut previous: Option<f64> = None;
    for level in 0..=quad.max_refinements {
        let near_rule = power_weighted(20 + 10 * level as usize, power, split);
        let near: f64 = near_rule
            .nodes
            .iter()
            .zip(&near_rule.weights)
            .map(|(z, w)| w * folded(*z))
            .sum();

        let mut bulk = 0.0;
        let mut lo = split;
        while lo < cutoff {
            let hi = (2.0 * lo).min(cutoff);
            let pieces = quad.panels * (1usize << level) * ((hi - lo) / PI).ceil().max(1.0) as usize;
            let width = (hi - lo) / pieces as f64;
            for k in 0..pieces {
                let a = lo + k as f64 * width;
                bulk += legendre.integrate(a, a + width, |z| folded(z) * z.powf(power));
            }
            lo = hi;
        }

        let total = c2 * (near + bulk + tail);
        if let Some(prev) = previous {
            if (total - prev).abs() <= quad.tolerance * total.abs() {
                return Ok(total);
            }
        }
        previous = Some(total);
        if level == quad.max_refinements {
            return Err(Error::QuadratureNotConverged {
                omega,
                previous: prev_or(previous, total),
                last: total,
            });
        }
    }
    unreachable!("loop returns on its last level")
}

fn prev_or(previous: Option<f64>, fallback: f64) -> f64 {
    previous.unwrap_or(fallback)
}

/// `int_0^1 |G_omega(x, y)|^2 dy` by composite Gauss-Legendre on both sides
/// of the kink at `y = x`.
pub fn green_l2_norm_sq(orders: &FractionalOrders, omega: f64, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfDomain { x, y: 0.0 });
    }
    let symbol = compute_s(orders, omega);
    let rule = gauss_legendre(16);
    let panels = 16 + (8.0 * symbol.sqrt_value.norm()).ceil() as usize;
    let mut total = 0.0;
    for (lo, hi) in [(0.0, x), (x, 1.0)] {
        if hi <= lo {
            continue;
        }
        let width = (hi - lo) / panels as f64;
        for k in 0..panels {
            let a = lo + k as f64 * width;
            total += rule.integrate(a, a + width, |y| green_at(&symbol, x, y.min(1.0)).norm_sqr());
        }
    }
    Ok(total)
}

/// `h(Re sqrt(s))` from the energy estimate `||G_omega(x, .)||^2 <= |s|^{-1} h`.
pub fn h_bound(symbol: &FrequencySymbol) -> f64 {
    let rho = symbol.sqrt_value.re;
    let turn = symbol.sqrt_value.im;
    let e2 = (-2.0 * rho).exp();
    let e4 = e2 * e2;
    (1.0 - e4) / (rho * (e4 + 1.0 + 2.0 * e2 * (2.0 * turn).cos()))
}
