use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::fdm::{GridSpec, SchemeRegime};
use crate::kernel::{FractionalOrders, HurstIndex};
use crate::phaselift::PhaseLiftOptions;

/// Where the source samples come from.
#[derive(Debug, Clone, PartialEq)]
pub enum SourceSpec {
    Example1,
    Example2,
    Example3,
    Custom(PathBuf),
}

impl fmt::Display for SourceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceSpec::Example1 => write!(f, "example1"),
            SourceSpec::Example2 => write!(f, "example2"),
            SourceSpec::Example3 => write!(f, "example3"),
            SourceSpec::Custom(p) => write!(f, "{}", p.display()),
        }
    }
}

impl SourceSpec {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "example1" => Ok(SourceSpec::Example1),
            "example2" => Ok(SourceSpec::Example2),
            "example3" => Ok(SourceSpec::Example3),
            t if t.contains('/') || t.contains('.') => Ok(SourceSpec::Custom(PathBuf::from(t))),
            t => Err(Error::UnknownSource(t.to_string())),
        }
    }
}

/// Validated experiment settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub orders: FractionalOrders,
    pub hurst: HurstIndex,
    pub t_final: f64,
    pub steps: usize,
    pub intervals: usize,
    pub paths: usize,
    pub masks: usize,
    pub frequencies: usize,
    pub cutoff: f64,
    pub epsilon: f64,
    pub seed: u64,
    pub source: SourceSpec,
    pub output_dir: PathBuf,
    pub solver: PhaseLiftOptions,
}

const KEYS: &[&str] = &[
    "orders",
    "H",
    "T",
    "N",
    "M",
    "P",
    "N_m",
    "N_omega",
    "W",
    "epsilon",
    "seed",
    "source",
    "output_dir",
    "lambda",
    "solver_stages",
    "solver_max_iters",
    "solver_tol",
];

fn err(line: usize, key: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        line,
        key: key.to_string(),
        reason: reason.into(),
    }
}

/// Number, optionally followed by `pi` (`4pi`, `4*pi`, `pi`).
fn parse_real(text: &str) -> std::result::Result<f64, String> {
    let t = text.trim();
    let (body, factor) = match t.strip_suffix("pi") {
        Some(rest) => (rest.trim().trim_end_matches('*').trim(), PI),
        None => (t, 1.0),
    };
    if body.is_empty() {
        return if factor == PI {
            Ok(PI)
        } else {
            Err("empty value".into())
        };
    }
    body.parse::<f64>()
        .map(|v| v * factor)
        .map_err(|e| format!("`{t}` is not a number ({e})"))
}

fn parse_list(text: &str) -> std::result::Result<Vec<f64>, String> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| format!("`{text}` is not a bracketed list"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(parse_real).collect()
}

fn parse_count(text: &str) -> std::result::Result<usize, String> {
    text.trim()
        .parse::<usize>()
        .map_err(|e| format!("`{}` is not a non-negative integer ({e})", text.trim()))
}

/// Parse the `key = value` grammar. Lines starting with `#` and blank lines
/// are ignored; every key may appear once; unknown keys are rejected.
pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let mut seen = HashSet::new();
    let mut orders = None;
    let mut hurst = None;
    let mut source = None;
    let mut t_final = 4.0 * PI;
    let mut steps = 100;
    let mut intervals = 128;
    let mut paths = 1000;
    let mut masks = 60;
    let mut frequencies = 64;
    let mut cutoff = None;
    let mut epsilon = 0.05;
    let mut seed = 0;
    let mut output_dir = PathBuf::from("out");
    let mut solver = PhaseLiftOptions::default();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(line, content, "expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(err(line, key, "unknown key"));
        }
        if !seen.insert(key.to_string()) {
            return Err(err(line, key, "duplicate key"));
        }
        let e = |reason: String| err(line, key, reason);
        let positive = |v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(err(line, key, format!("{v} must be positive")))
            }
        };
        let at_least = |v: usize, min: usize| {
            if v >= min {
                Ok(v)
            } else {
                Err(err(line, key, format!("{v} must be at least {min}")))
            }
        };
        match key {
            "orders" => {
                let list = parse_list(value).map_err(e)?;
                let o = FractionalOrders::new(list).map_err(|x| err(line, key, x.to_string()))?;
                SchemeRegime::classify(&o).map_err(|x| err(line, key, x.to_string()))?;
                orders = Some(o);
            }
            "H" => {
                let h = parse_real(value).map_err(e)?;
                hurst = Some(HurstIndex::new(h).map_err(|x| err(line, key, x.to_string()))?);
            }
            "T" => t_final = positive(parse_real(value).map_err(e)?)?,
            "N" => steps = at_least(parse_count(value).map_err(e)?, 1)?,
            "M" => intervals = at_least(parse_count(value).map_err(e)?, 2)?,
            "P" => paths = at_least(parse_count(value).map_err(e)?, 2)?,
            "N_m" => masks = at_least(parse_count(value).map_err(e)?, 1)?,
            "N_omega" => frequencies = at_least(parse_count(value).map_err(e)?, 2)?,
            "W" => cutoff = Some(positive(parse_real(value).map_err(e)?)?),
            "epsilon" => {
                let v = parse_real(value).map_err(e)?;
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(err(line, key, format!("{v} must be >= 0")));
                }
                epsilon = v;
            }
            "seed" => {
                seed = value
                    .parse::<u64>()
                    .map_err(|x| err(line, key, format!("`{value}`: {x}")))?
            }
            "source" => source = Some(SourceSpec::parse(value).map_err(|x| err(line, key, x.to_string()))?),
            "output_dir" => output_dir = PathBuf::from(value),
            "lambda" => {
                let v = parse_real(value).map_err(e)?;
                if !(v >= 0.0) {
                    return Err(err(line, key, format!("{v} must be >= 0")));
                }
                solver.lambda = Some(v);
            }
            "solver_stages" => solver.stages = at_least(parse_count(value).map_err(e)?, 1)?,
            "solver_max_iters" => solver.max_iters = at_least(parse_count(value).map_err(e)?, 1)?,
            "solver_tol" => solver.tol = positive(parse_real(value).map_err(e)?)?,
            _ => unreachable!("key list and match arms agree"),
        }
    }
    let missing = |key: &str| err(0, key, "required key is missing");
    let orders = orders.ok_or_else(|| missing("orders"))?;
    let hurst = hurst.ok_or_else(|| missing("H"))?;
    let source = source.ok_or_else(|| missing("source"))?;
    let cutoff = cutoff.unwrap_or(if orders.alpha_max() < 1.0 {
        10.0 * PI
    } else {
        3.0 * PI
    });
    Ok(ExperimentConfig {
        orders,
        hurst,
        t_final,
        steps,
        intervals,
        paths,
        masks,
        frequencies,
        cutoff,
        epsilon,
        seed,
        source,
        output_dir,
        solver,
    })
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config_str(&text)
}

fn list(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v:?}")).collect();
    format!("[{}]", parts.join(", "))
}

impl ExperimentConfig {
    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.t_final, self.steps, self.intervals)
    }

    /// Render in the grammar accepted by [`parse_config_str`].
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        put("orders", list(self.orders.as_slice()));
        put("H", format!("{:?}", self.hurst.value()));
        put("T", format!("{:?}", self.t_final));
        put("N", self.steps.to_string());
        put("M", self.intervals.to_string());
        put("P", self.paths.to_string());
        put("N_m", self.masks.to_string());
        put("N_omega", self.frequencies.to_string());
        put("W", format!("{:?}", self.cutoff));
        put("epsilon", format!("{:?}", self.epsilon));
        put("seed", self.seed.to_string());
        put("source", self.source.to_string());
        put("output_dir", self.output_dir.display().to_string());
        if let Some(l) = self.solver.lambda {
            put("lambda", format!("{l:?}"));
        }
        put("solver_stages", self.solver.stages.to_string());
        put("solver_max_iters", self.solver.max_iters.to_string());
        put("solver_tol", format!("{:?}", self.solver.tol));
        s
    }
}
