use std::io::{BufRead, Write};

use rayon::prelude::*;

use super::grid::GridSpec;
use super::scheme::{convolve_response, Scheme};
use crate::error::{Error, Result};
use crate::fbm::FbmSampler;
use crate::kernel::{FractionalOrders, HurstIndex};

/// Settings an ensemble was produced with.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleMeta {
    pub orders: Vec<f64>,
    pub hurst: f64,
    pub grid: GridSpec,
    pub seed: u64,
    pub source: Option<String>,
}

/// `P` boundary traces `u_0^0..u_0^N`, one row per fBm path.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryEnsemble {
    pub traces: Vec<Vec<f64>>,
    pub meta: EnsembleMeta,
}

/// Reusable pieces for driving many sources with the same paths.
#[derive(Debug)]
pub struct EnsembleDriver {
    scheme: Scheme,
    response: Vec<Vec<f64>>,
    sampler: FbmSampler,
}

impl EnsembleDriver {
    pub fn new(orders: &FractionalOrders, grid: GridSpec, hurst: HurstIndex) -> Result<Self> {
        let scheme = Scheme::new(orders, grid)?;
        let response = scheme.boundary_response()?;
        let sampler = FbmSampler::new(hurst, grid.intervals)?;
        Ok(Self {
            scheme,
            response,
            sampler,
        })
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    /// Boundary reaction to a unit drive along path `index`:
    /// entry `l` is the value `l` steps after the drive.
    pub fn path_response(&self, master_seed: u64, index: u64) -> Vec<f64> {
        let db = self.sampler.path(master_seed, index).increments();
        let scale = self.scheme.source_scale();
        self.response
            .iter()
            .map(|row| scale * row.iter().zip(&db).map(|(r, d)| r * d).sum::<f64>())
            .collect()
    }

    pub fn drive(&self, f_samples: &[f64]) -> Result<Vec<f64>> {
        self.scheme.drive(f_samples)
    }

    pub fn trace(&self, path_response: &[f64], drive: &[f64]) -> Vec<f64> {
        convolve_response(path_response, drive)
    }
}

/// `P` traces driven by `f` along paths `0..P` of the fBm substream keyed
/// by `master_seed`. Paths run in parallel; output order is path order.
pub fn simulate_ensemble(
    orders: &FractionalOrders,
    grid: &GridSpec,
    f_samples: &[f64],
    hurst: HurstIndex,
    paths: usize,
    master_seed: u64,
) -> Result<BoundaryEnsemble> {
    if paths == 0 {
        return Err(Error::invalid("P", "at least one path is required"));
    }
    if let Some(&f0) = f_samples.first() {
        let scale = f_samples.iter().fold(1.0f64, |a, b| a.max(b.abs()));
        if f0.abs() > 1e-12 * scale {
            return Err(Error::invalid(
                "f_samples",
                format!("the source must vanish at t = 0, got {f0}"),
            ));
        }
    }
    let driver = EnsembleDriver::new(orders, *grid, hurst)?;
    let drive = driver.drive(f_samples)?;
    let traces = (0..paths)
        .into_par_iter()
        .map(|p| {
            let trace = driver.trace(&driver.path_response(master_seed, p as u64), &drive);
            if trace.iter().all(|v| v.is_finite()) {
                Ok(trace)
            } else {
                Err(Error::Path {
                    index: p,
                    source: Box::new(Error::invalid("trace", "non-finite value")),
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundaryEnsemble {
        traces,
        meta: EnsembleMeta {
            orders: orders.as_slice().to_vec(),
            hurst: hurst.value(),
            grid: *grid,
            seed: master_seed,
            source: None,
        },
    })
}

fn format_list(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v:?}")).collect();
    format!("[{}]", parts.join(","))
}

impl BoundaryEnsemble {
    pub fn paths(&self) -> usize {
        self.traces.len()
    }

    /// Header `path,u_0,..,u_N`, then one row per path.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let steps = self.meta.grid.steps;
        let header: Vec<String> = (0..=steps).map(|n| format!("u_{n}")).collect();
        writeln!(out, "path,{}", header.join(","))?;
        for (p, row) in self.traces.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            writeln!(out, "{p},{}", cells.join(","))?;
        }
        Ok(())
    }

    /// Key-value sidecar in the configuration file grammar.
    pub fn write_sidecar<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let m = &self.meta;
        writeln!(out, "orders = {}", format_list(&m.orders))?;
        writeln!(out, "H = {:?}", m.hurst)?;
        writeln!(out, "T = {:?}", m.grid.t_final)?;
        writeln!(out, "N = {}", m.grid.steps)?;
        writeln!(out, "M = {}", m.grid.intervals)?;
        writeln!(out, "P = {}", self.traces.len())?;
        writeln!(out, "seed = {}", m.seed)?;
        if let Some(s) = &m.source {
            writeln!(out, "source = {s}")?;
        }
        Ok(())
    }

    /// Parse traces written by [`BoundaryEnsemble::write_csv`].
    pub fn read_traces<R: BufRead>(input: R, steps: usize) -> Result<Vec<Vec<f64>>> {
        let mut traces = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            if i == 0 || line.trim().is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .skip(1)
                .map(|c| {
                    c.trim().parse::<f64>().map_err(|e| Error::Config {
                        line: i + 1,
                        key: "trace".into(),
                        reason: e.to_string(),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != steps + 1 {
                return Err(Error::LengthMismatch {
                    what: "trace row",
                    expected: steps + 1,
                    found: row.len(),
                });
            }
            traces.push(row);
        }
        Ok(traces)
    }
}
