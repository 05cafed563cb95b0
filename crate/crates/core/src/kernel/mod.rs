//! Frequency-domain kernel of the stochastic boundary value problem.
//!
//! After a Fourier transform in time the problem at frequency `omega` reads
//! `u'' - s u = -f^(omega) dB^H/dx` on `(0, 1)` with `u'(0) = 0`, `u(1) = 0`.
//! Everything here is a pure function of its arguments.

mod green;
mod orders;
pub mod quadrature;
mod variance;

pub use green::{green_hat_boundary, green_value, BoundaryTransform};
pub use orders::{compute_s, FractionalOrders, FrequencySymbol, HurstIndex};
pub use variance::{compute_r, green_l2_norm_sq, h_bound, QuadratureSpec};
