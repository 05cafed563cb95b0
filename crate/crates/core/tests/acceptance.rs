//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach stdout.
//! Pass criterion numbers to run a subset:
//! `cargo test -p fracinv --test acceptance -- 1 3 8`.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use fracinv::fbm::{covariance_oracle, FbmSampler};
use fracinv::fdm::{simulate_ensemble, solve_field, GridSpec, SchemeRegime};
use fracinv::io::{builtin_source, parse_config_str, reconstruct, relative_l2_error};
use fracinv::kernel::{compute_r, green_l2_norm_sq, green_value};
use fracinv::phaselift::{
    extract_signal, forward_magnitudes, make_masks, solve_phaselift, MeasurementOperator,
    PhaseLiftOptions,
};
use fracinv::spectral::{ensemble_variance, DftTable, FrequencyGrid};
use fracinv::{FractionalOrders, HurstIndex, QuadratureSpec};

type Outcome = Result<(bool, String), fracinv::Error>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn orders(a: &[f64]) -> FractionalOrders {
    FractionalOrders::new(a.to_vec()).expect("valid orders")
}

fn hurst(h: f64) -> HurstIndex {
    HurstIndex::new(h).expect("valid Hurst index")
}

/// Mean and standard error of a sample.
fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

fn c1_isometry() -> Outcome {
    let q = QuadratureSpec::default();
    let mut worst = 0.0f64;
    for a in [[0.2, 0.3], [0.3, 1.5], [1.1, 1.5]] {
        let o = orders(&a);
        for w in [0.0, PI, 2.0 * PI, 5.0 * PI, 10.0 * PI] {
            let r = compute_r(&o, w, hurst(0.5), &q)?;
            let g = green_l2_norm_sq(&o, w, 0.0)?;
            worst = worst.max((r - g).abs() / g);
        }
    }
    Ok((worst <= 1e-5, format!("max relative gap {worst:.2e} (tol 1e-5)")))
}

fn c2_monte_carlo_isometry() -> Outcome {
    const PATHS: usize = 100_000;
    const M: usize = 512;
    let o = orders(&[0.3, 1.5]);
    let omegas = [0.0, PI, 5.0 * PI];
    let mut ok = true;
    let mut worst = 0.0f64;
    for h in [0.3, 0.7] {
        let sampler = FbmSampler::new(hurst(h), M)?;
        let weights = omegas
            .iter()
            .map(|&w| {
                (0..M)
                    .map(|m| green_value(&o, w, 0.0, (m as f64 + 0.5) / M as f64))
                    .collect::<Result<Vec<Complex64>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let samples: Vec<Vec<f64>> = (0..PATHS)
            .into_par_iter()
            .map(|p| {
                let db = sampler.path(11, p as u64).increments();
                weights
                    .iter()
                    .map(|g| g.iter().zip(&db).map(|(g, d)| g * d).sum::<Complex64>().norm_sqr())
                    .collect()
            })
            .collect();
        for (k, &w) in omegas.iter().enumerate() {
            let col: Vec<f64> = samples.iter().map(|s| s[k]).collect();
            let (v, se) = mean_se(&col);
            let r = compute_r(&o, w, hurst(h), &QuadratureSpec::default())?;
            let allowed = 3.0 * se + 0.02 * r;
            ok &= (v - r).abs() <= allowed;
            worst = worst.max((v - r).abs() / allowed);
        }
    }
    Ok((ok, format!("max |V - R| / (3 SE + 2% R) = {worst:.3}")))
}

fn c3_r_zero() -> Outcome {
    let r = compute_r(&orders(&[0.3, 1.5]), 0.0, hurst(0.5), &QuadratureSpec::default())?;
    let gap = (r - 1.0 / 3.0).abs();
    Ok((gap <= 1e-6, format!("R(0) = {r:.9}, |R(0) - 1/3| = {gap:.1e}")))
}

fn fitted_slope(r: &[f64], w: &[f64]) -> f64 {
    let xs: Vec<f64> = w.iter().map(|w| w.ln()).collect();
    let ys: Vec<f64> = r.iter().map(|r| r.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn c4_decay_slope() -> Outcome {
    let q = QuadratureSpec::default();
    let w: Vec<f64> = (0..10).map(|k| 10.0 * PI * 10f64.powf(k as f64 / 9.0)).collect();
    let r_of = |a: &[f64], h: f64| -> Result<Vec<f64>, fracinv::Error> {
        w.iter().map(|&w| compute_r(&orders(a), w, hurst(h), &q)).collect()
    };
    let alpha_max = 1.5;
    let (lo, hi) = (-alpha_max - 0.2, -alpha_max + 0.15);
    let mut ok = true;
    let mut parts = Vec::new();
    for h in [0.5, 0.7] {
        let s = fitted_slope(&r_of(&[0.3, 1.5], h)?, &w);
        ok &= (lo..=hi).contains(&s);
        parts.push(format!("H={h}: slope {s:.3}"));
    }
    // larger orders decay faster, as does larger H
    let small = r_of(&[0.2, 0.3], 0.5)?;
    let large = r_of(&[1.1, 1.5], 0.5)?;
    let rougher = r_of(&[0.3, 1.5], 0.5)?;
    let smoother = r_of(&[0.3, 1.5], 0.7)?;
    let ordered = small.iter().zip(&large).all(|(a, b)| a > b)
        && rougher.iter().zip(&smoother).all(|(a, b)| a > b);
    ok &= ordered;
    Ok((
        ok,
        format!("{} (window [{lo:.2}, {hi:.2}]); curve ordering {}", parts.join(", "), if ordered { "holds" } else { "violated" }),
    ))
}

/// `int_0^T sin(t) e^{-t/6} e^{-i w t} dt`.
fn example1_transform(w: f64, t_final: f64) -> Complex64 {
    let i = Complex64::i();
    let term = |c: Complex64| ((c * t_final).exp() - 1.0) / c;
    (term(i - 1.0 / 6.0 - i * w) - term(-i - 1.0 / 6.0 - i * w)) / (2.0 * i)
}

fn c5_variance_identity() -> Outcome {
    // The identity concerns the transform of the whole response, so the
    // source is extended by zero past 4 pi (continuously, since sin(4 pi) = 0)
    // and the boundary is recorded until the response has died out.
    let support = 4.0 * PI;
    let grid = GridSpec::new(3.0 * support, 1200, 128)?;
    let o = orders(&[0.3, 1.5]);
    let h = hurst(0.5);
    let f: Vec<f64> = grid
        .times()
        .iter()
        .map(|&t| if t < support { t.sin() * (-t / 6.0).exp() } else { 0.0 })
        .collect();
    let ens = simulate_ensemble(&o, &grid, &f, h, 10_000, 5)?;
    let omegas = [0.5, 1.0, 2.0];
    let table = DftTable::new(&grid, &omegas);
    let z: Vec<Vec<Complex64>> = ens.traces.par_iter().map(|t| table.apply(t)).collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for (k, &w) in omegas.iter().enumerate() {
        let col: Vec<Complex64> = z.iter().map(|r| r[k]).collect();
        let v = ensemble_variance(&col)?;
        let mean = col.iter().sum::<Complex64>() / col.len() as f64;
        let dev: Vec<f64> = col.iter().map(|c| (c - mean).norm_sqr()).collect();
        let (_, se) = mean_se(&dev);
        let target = compute_r(&o, w, h, &QuadratureSpec::default())? * example1_transform(w, support).norm_sqr();
        let zscore = (v - target) / se;
        ok &= zscore.abs() <= 3.0;
        parts.push(format!("w={w}: ratio {:.4}, z {zscore:.2}", v / target));
    }
    Ok((ok, parts.join("; ")))
}

fn c6_fbm_covariance() -> Outcome {
    const PATHS: usize = 100_000;
    const M: usize = 128;
    let nodes = [32usize, 64, 128];
    let mut ok = true;
    let mut worst = 0.0f64;
    for h in [0.3, 0.5, 0.7] {
        let sampler = FbmSampler::new(hurst(h), M)?;
        let picks: Vec<[f64; 3]> = (0..PATHS)
            .into_par_iter()
            .map(|p| {
                let v = sampler.path(23, p as u64).values;
                [v[nodes[0]], v[nodes[1]], v[nodes[2]]]
            })
            .collect();
        for i in 0..3 {
            for j in i..3 {
                let prods: Vec<f64> = picks.iter().map(|s| s[i] * s[j]).collect();
                let (c, se) = mean_se(&prods);
                let x = nodes[i] as f64 / M as f64;
                let y = nodes[j] as f64 / M as f64;
                let z = (c - covariance_oracle(hurst(h), x, y)) / se;
                ok &= z.abs() <= 3.0;
                worst = worst.max(z.abs());
            }
        }
    }
    Ok((ok, format!("max |z| over 18 covariances = {worst:.2} (tol 3)")))
}

fn c7_self_convergence() -> Outcome {
    let g = |x: f64, t: f64| (1.0 + t * t) * (PI * x / 2.0).cos() * (2.0 * t).sin();
    let mut ok = true;
    let mut parts = Vec::new();
    for a in [[0.3, 0.7], [0.4, 1.6], [1.2, 1.8]] {
        let o = orders(&a);
        let regime = SchemeRegime::classify(&o)?;
        let reference = solve_field(&o, &GridSpec::new(1.0, 800, 32)?, g)?;
        let mut errs = Vec::new();
        for n in [50usize, 100, 200] {
            let u = solve_field(&o, &GridSpec::new(1.0, n, 32)?, g)?;
            let stride = 800 / n;
            let e = (0..=n)
                .flat_map(|k| u[k].iter().zip(&reference[k * stride]).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            errs.push(e);
        }
        ok &= errs.windows(2).all(|w| w[1] < w[0]);
        parts.push(format!("{regime:?} {:.2e}/{:.2e}/{:.2e}", errs[0], errs[1], errs[2]));
    }
    Ok((ok, parts.join("; ")))
}

fn c8_phaselift_exact() -> Outcome {
    let grid = GridSpec::new(4.0 * PI, 32, 2)?;
    let f = builtin_source("example1", &grid)?.into_values();
    let freqs = FrequencyGrid::new(PI / grid.tau(), 48)?;
    let op = MeasurementOperator::new(make_masks(f.len(), 20, 0)?, freqs.nodes().to_vec(), grid.tau())?;
    let b: Vec<f64> = forward_magnitudes(&op, &f)?.into_iter().flatten().map(|v| v * v).collect();
    let (x, report) = solve_phaselift(&b, &op, &PhaseLiftOptions::default())?;
    let truth: Vec<f64> = f.iter().map(|v| v.abs()).collect();
    let err = relative_l2_error(&extract_signal(&x), &truth);
    Ok((err <= 1e-3, format!("relative l2 error {err:.2e} after {} iterations (tol 1e-3)", report.iterations)))
}

const SEEDS: [u64; 5] = [0, 1, 2, 3, 4];

fn c9_end_to_end() -> Outcome {
    let cutoffs = ["0.5pi", "3pi", "10pi"];
    let mut means = Vec::new();
    let mut best_worst = 0.0f64;
    for w in cutoffs {
        let mut errs = Vec::new();
        for seed in SEEDS {
            let c = parse_config_str(&format!(
                "orders = [0.3, 1.5]\nH = 0.5\nsource = example1\nW = {w}\nN_m = 60\nP = 1000\nepsilon = 0.01\nseed = {seed}"
            ))?;
            let f = builtin_source("example1", &c.grid()?)?.into_values();
            errs.push(reconstruct(&c, &f)?.error());
        }
        if w == "3pi" {
            best_worst = errs.iter().copied().fold(0.0, f64::max);
        }
        means.push(errs.iter().sum::<f64>() / errs.len() as f64);
    }
    let ok = best_worst <= 0.15 && means[1] < means[0] && means[1] < means[2];
    Ok((
        ok,
        format!(
            "mean error over {} seeds: W=0.5pi {:.4}, W=3pi {:.4}, W=10pi {:.4}; worst at 3pi {best_worst:.4} (tol 0.15)",
            SEEDS.len(),
            means[0],
            means[1],
            means[2]
        ),
    ))
}

fn c10_gibbs() -> Outcome {
    let (mut near, mut far) = (Vec::new(), Vec::new());
    for seed in SEEDS {
        let c = parse_config_str(&format!(
            "orders = [1.1, 1.5]\nH = 0.7\nsource = example3\nW = 3pi\nN_m = 60\nP = 1000\nepsilon = 0.01\nseed = {seed}"
        ))?;
        let grid = c.grid()?;
        let f = builtin_source("example3", &grid)?.into_values();
        let rec = reconstruct(&c, &f)?;
        let jumps: Vec<f64> = (1..=4).map(|k| k as f64 * 4.0 * PI / 5.0).collect();
        for (n, (r, t)) in rec.recon.iter().zip(&f).enumerate() {
            let cells = jumps
                .iter()
                .map(|j| (grid.time(n) - j).abs() / grid.tau())
                .fold(f64::INFINITY, f64::min);
            let e = (r - t.abs()).abs();
            if cells <= 2.0 + 1e-9 {
                near.push(e);
            } else if cells >= 3.0 - 1e-9 {
                far.push(e);
            }
        }
    }
    let near_mean = near.iter().sum::<f64>() / near.len() as f64;
    let far_mean = far.iter().sum::<f64>() / far.len() as f64;
    Ok((
        far_mean <= 0.5 * near_mean,
        format!("mean error near jumps {near_mean:.4}, away {far_mean:.4} (ratio {:.3}, tol 0.5)", far_mean / near_mean),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "isometry identity at H = 1/2", c1_isometry),
        (2, "Monte Carlo isometry", c2_monte_carlo_isometry),
        (3, "R(0) = 1/3", c3_r_zero),
        (4, "decay slope of R", c4_decay_slope),
        (5, "variance identity", c5_variance_identity),
        (6, "fBm covariance", c6_fbm_covariance),
        (7, "FDM self-convergence", c7_self_convergence),
        (8, "PhaseLift exactness", c8_phaselift_exact),
        (9, "end-to-end reconstruction", c9_end_to_end),
        (10, "Gibbs localisation", c10_gibbs),
    ];
    let selected: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        println!(
            "criterion {id:>2} {}: {name}: {detail} [{:.1}s]",
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        if !pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
