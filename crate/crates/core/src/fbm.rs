//! Fractional Brownian motion on the uniform grid `x_m = m / M`.
//!
//! Paths are synthesized exactly in distribution by circulant embedding of
//! the fractional Gaussian noise autocovariance (Davies–Harte).

use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::kernel::HurstIndex;
use crate::rng::{substream, Stage};

const MAX_DOUBLINGS: u32 = 8;

/// `E[B^H(x) B^H(y)] = (|x|^{2H} + |y|^{2H} - |x - y|^{2H}) / 2`.
pub fn covariance_oracle(hurst: HurstIndex, x: f64, y: f64) -> f64 {
    let p = 2.0 * hurst.value();
    0.5 * (x.abs().powf(p) + y.abs().powf(p) - (x - y).abs().powf(p))
}

/// Autocovariance of the increments `B^H(x_{m+k+1}) - B^H(x_{m+k})` and
/// `B^H(x_{m+1}) - B^H(x_m)` on a grid with spacing `step`.
pub fn increment_autocovariance(hurst: HurstIndex, step: f64, lag: usize) -> f64 {
    let p = 2.0 * hurst.value();
    let k = lag as f64;
    let core = (k + 1.0).powf(p) - 2.0 * k.powf(p) + (k - 1.0).abs().powf(p);
    0.5 * step.powf(p) * core
}

/// A sampled path `B^H(x_0), ..., B^H(x_M)` with `B^H(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FbmPath {
    pub values: Vec<f64>,
    pub hurst: HurstIndex,
    pub seed: u64,
}

impl FbmPath {
    /// Number of grid intervals `M`.
    pub fn intervals(&self) -> usize {
        self.values.len() - 1
    }

    /// `delta B_m = B^H(x_{m+1}) - B^H(x_m)` for `m = 0..M`.
    pub fn increments(&self) -> Vec<f64> {
        increments(&self.values)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "x,value")?;
        let m = self.intervals() as f64;
        for (k, v) in self.values.iter().enumerate() {
            writeln!(out, "{:?},{:?}", k as f64 / m, v)?;
        }
        Ok(())
    }
}

pub fn increments(values: &[f64]) -> Vec<f64> {
    values.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Precomputed circulant embedding for one `(H, M)` pair. Cheap to share
/// across threads; each call to [`FbmSampler::sample_increments`] draws an
/// independent path from the supplied generator.
#[derive(Clone)]
pub struct FbmSampler {
    hurst: HurstIndex,
    intervals: usize,
    scaled_sqrt_eigs: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FbmSampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FbmSampler")
            .field("hurst", &self.hurst)
            .field("intervals", &self.intervals)
            .field("embedding_len", &self.scaled_sqrt_eigs.len())
            .finish()
    }
}

impl FbmSampler {
    pub fn new(hurst: HurstIndex, intervals: usize) -> Result<Self> {
        if intervals < 2 {
            return Err(Error::invalid("M", "at least two grid intervals are required"));
        }
        let step = 1.0 / intervals as f64;
        let mut planner = FftPlanner::new();
        let mut half = intervals;
        let mut min_eig = 0.0;
        for _ in 0..=MAX_DOUBLINGS {
            let len = 2 * half;
            let mut row: Vec<Complex64> = (0..len)
                .map(|k| {
                    let lag = if k <= half { k } else { len - k };
                    Complex64::new(increment_autocovariance(hurst, step, lag), 0.0)
                })
                .collect();
            let fft = planner.plan_fft_forward(len);
            fft.process(&mut row);
            let largest = row.iter().map(|c| c.re).fold(0.0, f64::max);
            min_eig = row.iter().map(|c| c.re).fold(f64::INFINITY, f64::min);
            if min_eig >= -1e-12 * largest {
                let scaled_sqrt_eigs = row
                    .iter()
                    .map(|c| (c.re.max(0.0) / len as f64).sqrt())
                    .collect();
                return Ok(Self {
                    hurst,
                    intervals,
                    scaled_sqrt_eigs,
                    fft,
                });
            }
            half *= 2;
        }
        Err(Error::EmbeddingNotNonnegative {
            doublings: MAX_DOUBLINGS,
            min_eigenvalue: min_eig,
        })
    }

    pub fn hurst(&self) -> HurstIndex {
        self.hurst
    }

    pub fn intervals(&self) -> usize {
        self.intervals
    }

    /// Length of the circulant embedding actually used.
    pub fn embedding_len(&self) -> usize {
        self.scaled_sqrt_eigs.len()
    }

    /// `M` stationary fractional Gaussian noise increments.
    pub fn sample_increments<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut buf: Vec<Complex64> = self
            .scaled_sqrt_eigs
            .iter()
            .map(|&w| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(w * re, w * im)
            })
            .collect();
        self.fft.process(&mut buf);
        buf[..self.intervals].iter().map(|c| c.re).collect()
    }

    pub fn sample_values<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut values = Vec::with_capacity(self.intervals + 1);
        let mut acc = 0.0;
        values.push(0.0);
        for d in self.sample_increments(rng) {
            acc += d;
            values.push(acc);
        }
        values
    }

    /// Path `index` of the ensemble keyed by `master_seed`.
    pub fn path(&self, master_seed: u64, index: u64) -> FbmPath {
        let mut rng = substream(master_seed, Stage::Fbm, 0, index);
        FbmPath {
            values: self.sample_values(&mut rng),
            hurst: self.hurst,
            seed: master_seed,
        }
    }
}

/// Single path for `(H, M, seed)`; identical inputs give identical output.
pub fn generate_fbm(hurst: HurstIndex, intervals: usize, seed: u64) -> Result<FbmPath> {
    Ok(FbmSampler::new(hurst, intervals)?.path(seed, 0))
}
