//! Finite-difference schemes for the direct problem.
//!
//! Time is discretized with L1-type approximations of the Caputo
//! derivatives on `t_n = n tau`, space with central differences on
//! `x_m = m h`. Each step solves the tridiagonal system
//!
//! ```text
//! [ beta  -2                ] [ u_0     ]   [ w_0     ]
//! [ -1   beta  -1           ] [ u_1     ]   [ w_1     ]
//! [        ...   ...   ...  ] [ ...     ] = [ ...     ]
//! [             -1    beta  ] [ u_{M-1} ]   [ w_{M-1} ]
//! ```
//!
//! where the `-2` folds the Neumann ghost node `u_{-1} = u_1` and
//! `u_M = 0` is the Dirichlet end.

mod ensemble;
mod grid;
mod scheme;
mod tridiag;
mod weights;

pub use ensemble::{simulate_ensemble, BoundaryEnsemble, EnsembleDriver, EnsembleMeta};
pub use grid::{GridSpec, SchemeRegime};
pub use scheme::{
    assemble_beta, assemble_rhs, convolve_response, solve_field, solve_forward, Scheme,
};
pub use tridiag::tridiag_solve;
pub use weights::{caputo_weights_a, caputo_weights_b};
