use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::sources::{load_source, SourceSamples};
use crate::error::{Error, Result};
use crate::fbm::{FbmPath, FbmSampler};
use crate::fdm::{simulate_ensemble, BoundaryEnsemble, EnsembleDriver};
use crate::kernel::QuadratureSpec;
use crate::phaselift::{
    extract_signal, forward_magnitudes, make_masks, solve_phaselift, write_recon_csv,
    LiftedMatrix, MeasurementOperator, SolverReport,
};
use crate::spectral::{
    add_noise, ensemble_variance, kernel_values, recover_fhat_abs, DftTable, FrequencyGrid,
    NoisySpec, PhaselessModes,
};

/// Everything produced by one reconstruction run.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub times: Vec<f64>,
    pub truth: Vec<f64>,
    pub kernel: Vec<f64>,
    pub modes: PhaselessModes,
    /// `|<a_{i,k}, f>|` for the true source.
    pub true_magnitudes: Vec<Vec<f64>>,
    pub lifted: LiftedMatrix,
    pub report: SolverReport,
    pub recon: Vec<f64>,
}

impl Reconstruction {
    pub fn error(&self) -> f64 {
        relative_l2_error(&self.recon, &self.truth)
    }
}

/// `|| recon - |truth| ||_2 / || truth ||_2`; the plain norm of `recon` when
/// the truth vanishes.
pub fn relative_l2_error(recon: &[f64], truth: &[f64]) -> f64 {
    let num: f64 = recon
        .iter()
        .zip(truth)
        .map(|(r, t)| (r - t.abs()).powi(2))
        .sum::<f64>()
        .sqrt();
    let den: f64 = truth.iter().map(|t| t * t).sum::<f64>().sqrt();
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

/// Masks, per-mask ensembles, noise, transforms, cut-off recovery and the
/// lifted solve, for the source samples `f`.
pub fn reconstruct(config: &ExperimentConfig, f: &[f64]) -> Result<Reconstruction> {
    let grid = config.grid()?;
    if f.len() != grid.steps + 1 {
        return Err(Error::LengthMismatch {
            what: "source samples",
            expected: grid.steps + 1,
            found: f.len(),
        });
    }
    SourceSamples::new(f.to_vec())?;
    let masks = make_masks(grid.steps + 1, config.masks, config.seed).map_err(|e| e.in_stage("masks"))?;
    let freqs = FrequencyGrid::new(config.cutoff, config.frequencies)?;
    let noise = NoisySpec::new(config.epsilon, config.seed)?;

    let driver = EnsembleDriver::new(&config.orders, grid, config.hurst)
        .map_err(|e| e.in_stage("simulate"))?;
    let responses: Vec<Vec<f64>> = (0..config.paths)
        .into_par_iter()
        .map(|p| driver.path_response(config.seed, p as u64))
        .collect();

    let table = DftTable::new(&grid, freqs.nodes());
    let variances = (0..masks.len())
        .into_par_iter()
        .map(|i| {
            let drive = driver.drive(&masks.apply(i, f))?;
            let mut samples = vec![Vec::with_capacity(config.paths); freqs.len()];
            for (p, r) in responses.iter().enumerate() {
                let trace = driver.trace(r, &drive);
                let noisy = add_noise(&trace, &noise, i as u64, p as u64);
                for (col, z) in samples.iter_mut().zip(table.apply(&noisy)) {
                    col.push(z);
                }
            }
            samples
                .iter()
                .map(|col: &Vec<Complex64>| ensemble_variance(col))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_stage("spectral"))?;

    let kernel = kernel_values(&config.orders, config.hurst, &QuadratureSpec::default(), freqs.nodes())
        .map_err(|e| e.in_stage("kernel"))?;
    let magnitudes = variances
        .iter()
        .map(|v| recover_fhat_abs(v, &kernel))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_stage("cut-off"))?;
    let modes = PhaselessModes::new(freqs.nodes().to_vec(), magnitudes)?;

    let op = MeasurementOperator::new(masks, freqs.nodes().to_vec(), grid.tau())?;
    let b: Vec<f64> = modes.magnitudes.iter().flatten().map(|v| v * v).collect();
    let (lifted, report) =
        solve_phaselift(&b, &op, &config.solver).map_err(|e| e.in_stage("phaselift"))?;
    let recon = extract_signal(&lifted);
    let true_magnitudes = forward_magnitudes(&op, f)?;
    Ok(Reconstruction {
        times: grid.times(),
        truth: f.to_vec(),
        kernel,
        modes,
        true_magnitudes,
        lifted,
        report,
        recon,
    })
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

/// Run [`reconstruct`] on the configured source and write `recon.csv`,
/// `fhat.csv`, `solver_log.csv`, `metrics.txt` and `config.txt`.
pub fn run_reconstruct(config: &ExperimentConfig) -> Result<Reconstruction> {
    let grid = config.grid()?;
    let f = load_source(&config.source, &grid)?;
    let rec = reconstruct(config, f.values())?;
    let dir = &config.output_dir;
    let mut out = create(dir, "recon.csv")?;
    write_recon_csv(&mut out, &rec.times, Some(&rec.truth), &rec.recon)?;
    out.flush()?;
    let mut out = create(dir, "fhat.csv")?;
    rec.modes.write_csv(&mut out, 0, Some(&rec.true_magnitudes[0]))?;
    out.flush()?;
    let mut out = create(dir, "solver_log.csv")?;
    rec.report.write_log(&mut out)?;
    out.flush()?;
    let mut out = create(dir, "metrics.txt")?;
    writeln!(out, "relative_l2_error = {:?}", rec.error())?;
    writeln!(out, "solver_converged = {}", rec.report.converged)?;
    writeln!(out, "solver_iterations = {}", rec.report.iterations)?;
    writeln!(out, "leading_fraction = {:?}", rec.lifted.leading_fraction())?;
    writeln!(out, "leading_degenerate = {}", rec.lifted.leading_is_degenerate())?;
    out.flush()?;
    let mut out = create(dir, "config.txt")?;
    out.write_all(config.to_config_string().as_bytes())?;
    out.flush()?;
    Ok(rec)
}

/// Boundary ensemble for the configured source, written to `ensemble.csv`
/// with the sidecar `ensemble.meta`.
pub fn run_direct(config: &ExperimentConfig) -> Result<BoundaryEnsemble> {
    let grid = config.grid()?;
    let f = load_source(&config.source, &grid)?;
    let mut ens = simulate_ensemble(&config.orders, &grid, f.values(), config.hurst, config.paths, config.seed)
        .map_err(|e| e.in_stage("simulate"))?;
    ens.meta.source = Some(config.source.to_string());
    let mut out = create(&config.output_dir, "ensemble.csv")?;
    ens.write_csv(&mut out)?;
    out.flush()?;
    let mut out = create(&config.output_dir, "ensemble.meta")?;
    ens.write_sidecar(&mut out)?;
    out.flush()?;
    Ok(ens)
}

/// `R(omega)` on `0` plus 48 log-spaced nodes in `[0.1, 100 pi]`, and on
/// the configured cut-off grid; written to `r_omega.csv`.
pub fn run_r_omega(config: &ExperimentConfig) -> Result<Vec<(String, f64, f64)>> {
    let lo: f64 = 0.1f64.log10();
    let hi: f64 = (100.0 * std::f64::consts::PI).log10();
    let mut rows: Vec<(String, f64)> = vec![("log".into(), 0.0)];
    rows.extend((0..48).map(|k| ("log".to_string(), 10f64.powf(lo + (hi - lo) * k as f64 / 47.0))));
    let cut = FrequencyGrid::new(config.cutoff, config.frequencies)?;
    rows.extend(cut.nodes().iter().map(|&w| ("cutoff".to_string(), w)));
    let omegas: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let values = kernel_values(&config.orders, config.hurst, &QuadratureSpec::default(), &omegas)
        .map_err(|e| e.in_stage("kernel"))?;
    let table: Vec<(String, f64, f64)> = rows
        .into_iter()
        .zip(values)
        .map(|((g, w), r)| (g, w, r))
        .collect();
    let mut out = create(&config.output_dir, "r_omega.csv")?;
    writeln!(out, "grid,omega,R")?;
    for (g, w, r) in &table {
        writeln!(out, "{g},{w:?},{r:?}")?;
    }
    out.flush()?;
    Ok(table)
}

/// Path 0 of the configured seed on the `M`-interval grid, written to
/// `fbm.csv`.
pub fn run_fbm_gen(config: &ExperimentConfig) -> Result<FbmPath> {
    let path = FbmSampler::new(config.hurst, config.intervals)?.path(config.seed, 0);
    let mut out = create(&config.output_dir, "fbm.csv")?;
    path.write_csv(&mut out)?;
    out.flush()?;
    Ok(path)
}
