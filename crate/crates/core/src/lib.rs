//! Forward simulation and inverse source reconstruction for the stochastic
//! multi-term time-fractional diffusion-wave equation
//!
//! ```text
//! sum_k D_t^{alpha_k} u - u_xx = f(t) dB^H(x)/dx,   x in (0, 1),
//! u_x(0, t) = 0,  u(1, t) = 0,  zero initial data,
//! ```
//!
//! driven by a spatial fractional Brownian motion. The crate covers
//!
//! * the frequency-domain kernel: symbol `s(omega)`, the two-point Green
//!   function, its boundary Fourier transform and the variance kernel
//!   `R(omega) = E|int G_omega(0, y) dB^H(y)|^2` ([`kernel`]);
//! * exact fractional Brownian motion sampling ([`fbm`]);
//! * the finite-difference schemes for the three order regimes and a
//!   Monte Carlo ensemble driver ([`fdm`]);
//! * noise, boundary DFT, ensemble variance and spectral cut-off recovery of
//!   `|f^(omega)|` ([`spectral`]);
//! * masked measurements and a PhaseLift solver recovering `|f(t_n)|`
//!   ([`phaselift`]);
//! * configuration, built-in sources and the experiment pipelines ([`io`]).

pub mod error;
pub mod fbm;
pub mod fdm;
pub mod io;
pub mod kernel;
pub mod phaselift;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use kernel::{FractionalOrders, FrequencySymbol, HurstIndex, QuadratureSpec};
