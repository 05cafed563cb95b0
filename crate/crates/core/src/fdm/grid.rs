use crate::error::{Error, Result};
use crate::kernel::FractionalOrders;

/// Uniform space-time grid on `[0, 1] x [0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub t_final: f64,
    /// Number of time steps `N`.
    pub steps: usize,
    /// Number of space intervals `M`.
    pub intervals: usize,
}

impl GridSpec {
    pub fn new(t_final: f64, steps: usize, intervals: usize) -> Result<Self> {
        if !(t_final > 0.0 && t_final.is_finite()) {
            return Err(Error::invalid("T", "time horizon must be positive"));
        }
        if steps < 1 {
            return Err(Error::invalid("N", "at least one time step is required"));
        }
        if intervals < 2 {
            return Err(Error::invalid("M", "at least two space intervals are required"));
        }
        Ok(Self {
            t_final,
            steps,
            intervals,
        })
    }

    pub fn tau(&self) -> f64 {
        self.t_final / self.steps as f64
    }

    pub fn h(&self) -> f64 {
        1.0 / self.intervals as f64
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.tau()
    }

    pub fn space(&self, m: usize) -> f64 {
        m as f64 * self.h()
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps).map(|n| self.time(n)).collect()
    }
}

/// Which discretization applies, decided by where the orders sit relative
/// to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeRegime {
    /// Every order in `(0, 1)`: L1 scheme at level `n`.
    SubSub,
    /// Orders on both sides of 1: scheme averaged on levels `n - 1` and `n`.
    SubSuper,
    /// Every order in `(1, 2)`: averaged scheme with the `(1, 2)` L1 formula.
    SuperSuper,
}

impl SchemeRegime {
    pub fn classify(orders: &FractionalOrders) -> Result<Self> {
        let a = orders.as_slice();
        if a.iter().any(|&x| x == 1.0 || x >= 2.0) {
            return Err(Error::InvalidOrders {
                orders: a.to_vec(),
                reason: "finite-difference schemes need every order in (0, 1) or (1, 2)".into(),
            });
        }
        let below = a.iter().filter(|&&x| x < 1.0).count();
        Ok(if below == a.len() {
            SchemeRegime::SubSub
        } else if below == 0 {
            SchemeRegime::SuperSuper
        } else {
            SchemeRegime::SubSuper
        })
    }

    /// Whether the step is centred at `n - 1/2`.
    pub fn averaged(self) -> bool {
        !matches!(self, SchemeRegime::SubSub)
    }
}
