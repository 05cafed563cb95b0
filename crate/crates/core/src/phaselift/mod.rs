//! Masked phase retrieval by lifting.
//!
//! A real signal `f` of length `N + 1` is observed only through
//! `|<a_{i,k}, f>|` with `a_{i,k}[n] = tau * mask_i[n] * e^{-i omega_k t_n}`.
//! Writing `X = f f^T` turns each squared magnitude into the linear functional
//! `a^* X a`, and the rank-one constraint is relaxed to `X >= 0` with a trace
//! penalty.

mod lifted;
mod masks;
mod operator;
mod solver;

pub use lifted::{extract_signal, LiftedMatrix};
pub use masks::{make_masks, MaskSet};
pub use operator::{forward_magnitudes, MeasurementOperator};
pub use solver::{solve_phaselift, PhaseLiftOptions, SolverReport};

use std::io::Write;

/// Columns `t[,f_true_abs],f_recon_abs`.
pub fn write_recon_csv<W: Write>(
    mut out: W,
    times: &[f64],
    truth: Option<&[f64]>,
    recon: &[f64],
) -> std::io::Result<()> {
    match truth {
        Some(_) => writeln!(out, "t,f_true_abs,f_recon_abs")?,
        None => writeln!(out, "t,f_recon_abs")?,
    }
    for (n, t) in times.iter().enumerate() {
        match truth {
            Some(f) => writeln!(out, "{t:?},{:?},{:?}", f[n].abs(), recon[n])?,
            None => writeln!(out, "{t:?},{:?}", recon[n])?,
        }
    }
    Ok(())
}
