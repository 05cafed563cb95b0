use std::io::Write;

use nalgebra::DMatrix;

use super::lifted::{sorted_eigen, LiftedMatrix};
use super::operator::MeasurementOperator;
use crate::error::{Error, Result};

/// Settings for [`solve_phaselift`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseLiftOptions {
    /// Trace weight of the first stage; `None` means `1e-3 ||b||`.
    pub lambda: Option<f64>,
    /// Continuation stages, each dividing the weight by `stage_factor`.
    pub stages: usize,
    pub stage_factor: f64,
    /// Iteration cap per stage.
    pub max_iters: usize,
    /// Stop a stage once the relative objective decrease falls below this.
    pub tol: f64,
}

impl Default for PhaseLiftOptions {
    fn default() -> Self {
        Self {
            lambda: None,
            stages: 3,
            stage_factor: 10.0,
            max_iters: 3000,
            tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogEntry {
    pub stage: usize,
    pub iteration: usize,
    pub lambda: f64,
    pub objective: f64,
    pub restarted: bool,
}

/// Outcome of a solve: whether every stage met its tolerance, and the
/// per-iteration objective history.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    pub converged: bool,
    pub iterations: usize,
    pub step: f64,
    pub log: Vec<LogEntry>,
}

impl SolverReport {
    pub fn final_objective(&self) -> Option<f64> {
        self.log.last().map(|e| e.objective)
    }

    /// CSV with columns `stage,iteration,lambda,objective,restarted`.
    pub fn write_log<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "stage,iteration,lambda,objective,restarted")?;
        for e in &self.log {
            writeln!(
                out,
                "{},{},{:?},{:?},{}",
                e.stage, e.iteration, e.lambda, e.objective, e.restarted as u8
            )?;
        }
        Ok(())
    }
}

struct Problem<'a> {
    op: &'a MeasurementOperator,
    b: Vec<f64>,
}

impl Problem<'_> {
    fn residual(&self, x: &DMatrix<f64>) -> Result<Vec<f64>> {
        let mut r = self.op.apply(x)?;
        r.iter_mut().zip(&self.b).for_each(|(v, b)| *v -= b);
        Ok(r)
    }

    fn objective(&self, x: &DMatrix<f64>, lambda: f64) -> Result<f64> {
        let r = self.residual(x)?;
        Ok(r.iter().map(|v| v * v).sum::<f64>() + lambda * x.trace())
    }

    /// Proximal gradient step from `y`.
    fn step(&self, y: &DMatrix<f64>, t: f64, lambda: f64) -> Result<DMatrix<f64>> {
        let r = self.residual(y)?;
        let grad = self.op.adjoint(&r)?;
        let mut z = y - grad * (2.0 * t);
        z = (&z + z.transpose()) * 0.5;
        Ok(project(&z, t * lambda))
    }
}

/// `V max(D - shift, 0) V^T`.
fn project(z: &DMatrix<f64>, shift: f64) -> DMatrix<f64> {
    let n = z.nrows();
    let (values, vectors) = sorted_eigen(z);
    let mut out = DMatrix::zeros(n, n);
    for (j, &mu) in values.iter().enumerate() {
        let w = mu - shift;
        if w <= 0.0 {
            break;
        }
        let v = vectors.column(j);
        out.ger(w, &v, &v, 1.0);
    }
    out
}

/// Minimize `sum (a^* X a - b)^2 + lambda tr X` over `X >= 0` by
/// accelerated proximal gradient with objective restarts and a
/// continuation schedule on `lambda`.
///
/// Accepted iterates never increase the objective: when the accelerated
/// candidate does, momentum is reset and a plain proximal step is taken.
pub fn solve_phaselift(
    b: &[f64],
    op: &MeasurementOperator,
    opts: &PhaseLiftOptions,
) -> Result<(LiftedMatrix, SolverReport)> {
    if b.len() != op.len() {
        return Err(Error::LengthMismatch {
            what: "measurements",
            expected: op.len(),
            found: b.len(),
        });
    }
    if b.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::invalid("b", "squared magnitudes must be finite and >= 0"));
    }
    if opts.stages == 0 || !(opts.stage_factor >= 1.0) || !(opts.tol > 0.0) {
        return Err(Error::invalid("options", "need stages >= 1, factor >= 1, tol > 0"));
    }
    let n = op.signal_len();
    let scale = b.iter().fold(0.0f64, |a, v| a.max(*v));
    if scale == 0.0 {
        let report = SolverReport {
            converged: true,
            iterations: 0,
            step: 0.0,
            log: Vec::new(),
        };
        return Ok((LiftedMatrix::new(DMatrix::zeros(n, n))?, report));
    }
    let problem = Problem {
        op,
        b: b.iter().map(|v| v / scale).collect(),
    };
    let b_norm = problem.b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut lambda = match opts.lambda {
        Some(l) if l >= 0.0 => l / scale,
        Some(l) => return Err(Error::invalid("lambda", format!("{l} is negative"))),
        None => 1e-3 * b_norm,
    };
    let lipschitz = 2.0 * op.norm_sq_estimate(60)? * 1.01;
    if !(lipschitz > 0.0) {
        return Err(Error::invalid("operator", "measurement operator is zero"));
    }
    let t = 1.0 / lipschitz;

    let mut x = DMatrix::zeros(n, n);
    let mut log = Vec::new();
    let mut converged = true;
    let mut iterations = 0;
    for stage in 0..opts.stages {
        let mut f_prev = problem.objective(&x, lambda)?;
        let mut y = x.clone();
        let mut theta = 1.0f64;
        let mut stage_done = false;
        for iter in 0..opts.max_iters {
            let mut candidate = problem.step(&y, t, lambda)?;
            let mut f_new = problem.objective(&candidate, lambda)?;
            let mut restarted = false;
            if f_new > f_prev {
                restarted = true;
                theta = 1.0;
                candidate = problem.step(&x, t, lambda)?;
                f_new = problem.objective(&candidate, lambda)?.min(f_prev);
            }
            iterations += 1;
            log.push(LogEntry {
                stage,
                iteration: iter,
                lambda: lambda * scale,
                objective: f_new * scale * scale,
                restarted,
            });
            let decrease = f_prev - f_new;
            let x_prev = std::mem::replace(&mut x, candidate);
            let theta_next = 0.5 * (1.0 + (1.0 + 4.0 * theta * theta).sqrt());
            y = &x + (&x - &x_prev) * ((theta - 1.0) / theta_next);
            theta = if restarted { 1.0 } else { theta_next };
            if !restarted && decrease <= opts.tol * f_prev.abs().max(f64::MIN_POSITIVE) {
                stage_done = true;
                break;
            }
            f_prev = f_new;
        }
        converged &= stage_done;
        lambda /= opts.stage_factor;
    }
    let lifted = LiftedMatrix::new(x * scale)?;
    Ok((
        lifted,
        SolverReport {
            converged,
            iterations,
            step: t,
            log,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phaselift::{extract_signal, forward_magnitudes, make_masks};
    use std::f64::consts::PI;

    fn setup(len: usize, masks: usize, freqs: usize) -> (MeasurementOperator, Vec<f64>) {
        let tau = 4.0 * PI / (len - 1) as f64;
        let w: Vec<f64> = (0..freqs).map(|k| PI / tau * k as f64 / (freqs - 1) as f64).collect();
        let op = MeasurementOperator::new(make_masks(len, masks, 3).unwrap(), w, tau).unwrap();
        let f: Vec<f64> = (0..len)
            .map(|n| {
                let t = n as f64 * tau;
                t.sin() * (-t / 6.0).exp()
            })
            .collect();
        (op, f)
    }

    fn squared(op: &MeasurementOperator, f: &[f64]) -> Vec<f64> {
        forward_magnitudes(op, f).unwrap().into_iter().flatten().map(|v| v * v).collect()
    }

    #[test]
    fn zero_data_zero_matrix() {
        let (op, _) = setup(9, 3, 6);
        let (x, report) = solve_phaselift(&vec![0.0; op.len()], &op, &PhaseLiftOptions::default()).unwrap();
        assert!(x.matrix().norm() <= 1e-12);
        assert!(report.converged);
    }

    #[test]
    fn recovers_small_signal() {
        let (op, f) = setup(17, 10, 24);
        let b = squared(&op, &f);
        let (x, report) = solve_phaselift(&b, &op, &PhaseLiftOptions::default()).unwrap();
        let rec = extract_signal(&x);
        let num: f64 = rec.iter().zip(&f).map(|(r, t)| (r - t.abs()).powi(2)).sum();
        let den: f64 = f.iter().map(|t| t * t).sum();
        assert!((num / den).sqrt() < 1e-3, "err {} report {:?}", (num / den).sqrt(), report.iterations);
    }

    #[test]
    fn accepted_objective_monotone() {
        let (op, f) = setup(13, 6, 16);
        let b = squared(&op, &f);
        let opts = PhaseLiftOptions {
            stages: 1,
            max_iters: 300,
            ..PhaseLiftOptions::default()
        };
        let (_, report) = solve_phaselift(&b, &op, &opts).unwrap();
        for w in report.log.windows(2) {
            assert!(w[1].objective <= w[0].objective * (1.0 + 1e-12));
        }
        let mut buf = Vec::new();
        report.write_log(&mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("stage,iteration"));
    }

    #[test]
    fn rejects_bad_input() {
        let (op, _) = setup(9, 3, 6);
        assert!(solve_phaselift(&[1.0; 3], &op, &PhaseLiftOptions::default()).is_err());
        let mut b = vec![1.0; op.len()];
        b[0] = -1.0;
        assert!(solve_phaselift(&b, &op, &PhaseLiftOptions::default()).is_err());
    }
}
