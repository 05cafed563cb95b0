use statrs::function::gamma::gamma;

use super::grid::{GridSpec, SchemeRegime};
use super::tridiag::tridiag_solve;
use super::weights::{caputo_weights_a, caputo_weights_b};
use crate::error::{Error, Result};
use crate::fbm::FbmPath;
use crate::kernel::FractionalOrders;

/// Precomputed coefficients of one scheme on one grid.
///
/// After moving every known level to the right-hand side, the history
/// contribution at step `n` is `sum_{l=1}^{n-1} kernel[l] * u^{n-l}`. The
/// kernel depends on the lag only, so the scheme is shift invariant in time.
#[derive(Debug, Clone)]
pub struct Scheme {
    grid: GridSpec,
    regime: SchemeRegime,
    beta: f64,
    kernel: Vec<f64>,
}

fn sub_coefficient(alpha: f64, grid: &GridSpec) -> f64 {
    grid.h().powi(2) / (grid.tau().powf(alpha) * gamma(2.0 - alpha))
}

fn super_coefficient(alpha: f64, grid: &GridSpec) -> f64 {
    grid.h().powi(2) / (grid.tau().powf(alpha) * gamma(3.0 - alpha))
}

fn check_regime(regime: SchemeRegime, orders: &FractionalOrders) -> Result<()> {
    let actual = SchemeRegime::classify(orders)?;
    if actual != regime {
        return Err(Error::InvalidOrders {
            orders: orders.as_slice().to_vec(),
            reason: format!("orders belong to {actual:?}, not {regime:?}"),
        });
    }
    Ok(())
}

/// Diagonal entry of the step matrix.
pub fn assemble_beta(
    regime: SchemeRegime,
    orders: &FractionalOrders,
    grid: &GridSpec,
) -> Result<f64> {
    check_regime(regime, orders)?;
    // a_0 = b_0 = 1
    Ok(2.0
        + orders
            .as_slice()
            .iter()
            .map(|&a| {
                if a < 1.0 {
                    sub_coefficient(a, grid)
                } else {
                    2.0 * super_coefficient(a, grid)
                }
            })
            .sum::<f64>())
}

impl Scheme {
    pub fn new(orders: &FractionalOrders, grid: GridSpec) -> Result<Self> {
        let regime = SchemeRegime::classify(orders)?;
        let beta = assemble_beta(regime, orders, &grid)?;
        let len = grid.steps;
        let mut kernel = vec![0.0; len + 1];
        for &alpha in orders.as_slice() {
            if alpha < 1.0 {
                let c = sub_coefficient(alpha, &grid);
                let a = caputo_weights_a(alpha, len)?;
                for l in 1..=len {
                    kernel[l] += c * match (regime.averaged(), l) {
                        (false, _) => a[l - 1] - a[l],
                        (true, 1) => -a[1],
                        (true, _) => a[l - 2] - a[l],
                    };
                }
            } else {
                let d = 2.0 * super_coefficient(alpha, &grid);
                let b = caputo_weights_b(alpha, len)?;
                let diff = |l: usize| b[l - 1] - b[l];
                for l in 1..=len {
                    kernel[l] += d * if l == 1 {
                        b[0] + diff(1)
                    } else {
                        diff(l) - diff(l - 1)
                    };
                }
            }
        }
        Ok(Self {
            grid,
            regime,
            beta,
            kernel,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn regime(&self) -> SchemeRegime {
        self.regime
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Factor multiplying `drive_n * dB_m` in the right-hand side.
    pub fn source_scale(&self) -> f64 {
        if self.regime.averaged() {
            2.0 * self.grid.h()
        } else {
            self.grid.h()
        }
    }

    /// Per-step source weights: `f(t_n)` for SubSub, `f_{n-1/2}` otherwise.
    /// Entry 0 is unused and set to zero.
    pub fn drive(&self, f_samples: &[f64]) -> Result<Vec<f64>> {
        let n = self.grid.steps;
        if f_samples.len() != n + 1 {
            return Err(Error::LengthMismatch {
                what: "source samples",
                expected: n + 1,
                found: f_samples.len(),
            });
        }
        let mut d = vec![0.0; n + 1];
        for k in 1..=n {
            d[k] = if self.regime.averaged() {
                0.5 * (f_samples[k] + f_samples[k - 1])
            } else {
                f_samples[k]
            };
        }
        Ok(d)
    }

    /// Right-hand side for step `n = history.len()` with an extra `load`
    /// added row by row.
    pub(crate) fn rhs_into(&self, history: &[Vec<f64>], load: &[f64], out: &mut [f64]) {
        let n = history.len();
        let m = out.len();
        out.copy_from_slice(load);
        for l in 1..n {
            let k = self.kernel[l];
            for (o, u) in out.iter_mut().zip(&history[n - l]) {
                *o += k * u;
            }
        }
        if self.regime.averaged() {
            let prev = &history[n - 1];
            out[0] += 2.0 * prev[1] - 2.0 * prev[0];
            for i in 1..m {
                let right = if i + 1 < m { prev[i + 1] } else { 0.0 };
                out[i] += prev[i - 1] - 2.0 * prev[i] + right;
            }
        }
    }

    fn check_history(&self, history: &[Vec<f64>]) -> Result<()> {
        let m = self.grid.intervals;
        if history.is_empty() || history.len() > self.grid.steps {
            return Err(Error::LengthMismatch {
                what: "history levels (between 1 and N)",
                expected: self.grid.steps,
                found: history.len(),
            });
        }
        if let Some(bad) = history.iter().find(|u| u.len() != m) {
            return Err(Error::LengthMismatch {
                what: "history level",
                expected: m,
                found: bad.len(),
            });
        }
        Ok(())
    }

    /// Advance from `history = [u^0, .., u^{n-1}]` to `u^n`.
    pub fn step(&self, history: &[Vec<f64>], load: &[f64]) -> Result<Vec<f64>> {
        self.check_history(history)?;
        if load.len() != self.grid.intervals {
            return Err(Error::LengthMismatch {
                what: "load vector",
                expected: self.grid.intervals,
                found: load.len(),
            });
        }
        let mut rhs = vec![0.0; load.len()];
        self.rhs_into(history, load, &mut rhs);
        tridiag_solve(self.beta, &rhs)
    }

    /// March `n = 1..=N` from zero data. `load(n, buf)` fills the source
    /// part of the right-hand side at step `n`. Returns `u^0..u^N`, each of
    /// length `M` (the Dirichlet node is not stored).
    pub fn march<F>(&self, mut load: F) -> Result<Vec<Vec<f64>>>
    where
        F: FnMut(usize, &mut [f64]),
    {
        let m = self.grid.intervals;
        let mut field = Vec::with_capacity(self.grid.steps + 1);
        field.push(vec![0.0; m]);
        let mut buf = vec![0.0; m];
        let mut rhs = vec![0.0; m];
        for n in 1..=self.grid.steps {
            buf.iter_mut().for_each(|v| *v = 0.0);
            load(n, &mut buf);
            self.rhs_into(&field, &buf, &mut rhs);
            field.push(tridiag_solve(self.beta, &rhs)?);
        }
        Ok(field)
    }

    /// Row 0 of the solution operator: `response[l][m]` is the change in
    /// `u_0^{n}` per unit load at node `m` applied at step `n - l`.
    ///
    /// The step matrices are polynomials in the fold matrix `T` (ones off the
    /// diagonal, `T[0][1] = 2`), and `T^T = W T W^{-1}` with
    /// `W = diag(1/2, 1, .., 1)`, so one march with a load on node 0 yields
    /// every column.
    pub fn boundary_response(&self) -> Result<Vec<Vec<f64>>> {
        let field = self.march(|n, buf| {
            if n == 1 {
                buf[0] = 1.0;
            }
        })?;
        Ok(field[1..]
            .iter()
            .map(|u| {
                let mut row = u.clone();
                row[1..].iter_mut().for_each(|v| *v *= 2.0);
                row
            })
            .collect())
    }
}

/// Right-hand side `[w_0^n, .., w_{M-1}^n]` for step `n = history.len()`.
pub fn assemble_rhs(
    regime: SchemeRegime,
    orders: &FractionalOrders,
    grid: &GridSpec,
    history: &[Vec<f64>],
    f_samples: &[f64],
    delta_b: &[f64],
) -> Result<Vec<f64>> {
    check_regime(regime, orders)?;
    let scheme = Scheme::new(orders, *grid)?;
    scheme.check_history(history)?;
    if delta_b.len() != grid.intervals {
        return Err(Error::LengthMismatch {
            what: "fBm increments",
            expected: grid.intervals,
            found: delta_b.len(),
        });
    }
    let drive = scheme.drive(f_samples)?;
    let n = history.len();
    let scale = scheme.source_scale() * drive[n];
    let load: Vec<f64> = delta_b.iter().map(|d| scale * d).collect();
    let mut out = vec![0.0; grid.intervals];
    scheme.rhs_into(history, &load, &mut out);
    Ok(out)
}

fn check_source(f_samples: &[f64]) -> Result<()> {
    let scale = f_samples.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    match f_samples.first() {
        Some(f0) if f0.abs() > 1e-12 * scale.max(1.0) => Err(Error::invalid(
            "f_samples",
            format!("the source must vanish at t = 0, got {f0}"),
        )),
        _ => Ok(()),
    }
}

/// Boundary trace `u_0^0..u_0^N` driven by `f(t) dB^H(x)` along `path`.
pub fn solve_forward(
    orders: &FractionalOrders,
    grid: &GridSpec,
    f_samples: &[f64],
    path: &FbmPath,
) -> Result<Vec<f64>> {
    let scheme = Scheme::new(orders, *grid)?;
    check_source(f_samples)?;
    if path.intervals() != grid.intervals {
        return Err(Error::LengthMismatch {
            what: "fBm path intervals",
            expected: grid.intervals,
            found: path.intervals(),
        });
    }
    let drive = scheme.drive(f_samples)?;
    let db = path.increments();
    let scale = scheme.source_scale();
    let field = scheme.march(|n, buf| {
        let s = scale * drive[n];
        buf.iter_mut().zip(&db).for_each(|(b, d)| *b = s * d);
    })?;
    Ok(field.iter().map(|u| u[0]).collect())
}

/// Full field for a deterministic source `g(x, t)` replacing `f dB^H / dx`.
/// The source enters at level `n` (SubSub) or as the average of levels
/// `n - 1` and `n`. Rows are `u^0..u^N`, each with `M + 1` nodes including
/// the Dirichlet end.
pub fn solve_field<G>(orders: &FractionalOrders, grid: &GridSpec, g: G) -> Result<Vec<Vec<f64>>>
where
    G: Fn(f64, f64) -> f64,
{
    let scheme = Scheme::new(orders, *grid)?;
    let h2 = grid.h().powi(2);
    let averaged = scheme.regime().averaged();
    let field = scheme.march(|n, buf| {
        let (t_now, t_prev) = (grid.time(n), grid.time(n - 1));
        for (m, b) in buf.iter_mut().enumerate() {
            let x = grid.space(m);
            *b = if averaged {
                h2 * (g(x, t_now) + g(x, t_prev))
            } else {
                h2 * g(x, t_now)
            };
        }
    })?;
    Ok(field
        .into_iter()
        .map(|mut u| {
            u.push(0.0);
            u
        })
        .collect())
}

/// `u_0^n = sum_{j=1}^{n} drive[j] * response[n - j]` for `n = 0..=N`,
/// where `response[l]` is the boundary reaction `l` steps after a unit drive.
pub fn convolve_response(response: &[f64], drive: &[f64]) -> Vec<f64> {
    let n_steps = drive.len().saturating_sub(1);
    let mut trace = vec![0.0; n_steps + 1];
    for (n, t) in trace.iter_mut().enumerate().skip(1) {
        let mut acc = 0.0;
        for j in 1..=n {
            acc += drive[j] * response[n - j];
        }
        *t = acc;
    }
    trace
}
