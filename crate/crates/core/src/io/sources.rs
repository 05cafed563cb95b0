use std::f64::consts::PI;
use std::path::Path;

use super::config::SourceSpec;
use crate::error::{Error, Result};
use crate::fdm::GridSpec;

/// `f(t_n)` for `n = 0..=N`, with `f(t_0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceSamples {
    values: Vec<f64>,
}

impl SourceSamples {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        match values.first() {
            None => Err(Error::invalid("source", "no samples")),
            Some(&f0) if f0 != 0.0 => Err(Error::invalid(
                "source",
                format!("f(t_0) must be 0, got {f0}"),
            )),
            Some(_) if values.iter().any(|v| !v.is_finite()) => {
                Err(Error::invalid("source", "samples must be finite"))
            }
            Some(_) => Ok(Self { values }),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

fn example3(t: f64) -> f64 {
    const LEVELS: [f64; 5] = [0.0, 2.0, 0.5, 1.5, 0.0];
    let piece = (t / (4.0 * PI / 5.0) + 1e-9).floor();
    if piece < 0.0 {
        0.0
    } else {
        LEVELS.get(piece as usize).copied().unwrap_or(0.0)
    }
}

/// Samples of one of the three built-in sources on the grid times.
pub fn builtin_source(name: &str, grid: &GridSpec) -> Result<SourceSamples> {
    let f: fn(f64) -> f64 = match name {
        "example1" => |t| t.sin() * (-t / 6.0).exp(),
        "example2" => |t| t.sin() * (2.0 * t).cos(),
        "example3" => example3,
        other => return Err(Error::UnknownSource(other.to_string())),
    };
    SourceSamples::new(grid.times().into_iter().map(f).collect())
}

/// One value per line, or CSV rows whose last column is the value. A first
/// line that does not parse is treated as a header.
pub fn read_source_file(path: &Path, grid: &GridSpec) -> Result<SourceSamples> {
    let text = std::fs::read_to_string(path)?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cell = line.rsplit(',').next().unwrap_or(line).trim();
        match cell.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if i == 0 => continue,
            Err(e) => {
                return Err(Error::Config {
                    line: i + 1,
                    key: "source".into(),
                    reason: format!("`{cell}`: {e}"),
                })
            }
        }
    }
    if values.len() != grid.steps + 1 {
        return Err(Error::LengthMismatch {
            what: "source file samples",
            expected: grid.steps + 1,
            found: values.len(),
        });
    }
    SourceSamples::new(values)
}

pub fn load_source(spec: &SourceSpec, grid: &GridSpec) -> Result<SourceSamples> {
    match spec {
        SourceSpec::Custom(p) => read_source_file(p, grid),
        named => builtin_source(&named.to_string(), grid),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::io::Write;

    fn grid() -> GridSpec {
        GridSpec::new(4.0 * PI, 100, 128).unwrap()
    }

    #[test]
    fn examples() {
        let g = grid();
        for name in ["example1", "example2", "example3"] {
            let s = builtin_source(name, &g).unwrap();
            assert_eq!(s.values().len(), 101);
            assert_eq!(s.values()[0], 0.0);
        }
        assert_eq!(example3(PI), 2.0);
        assert_relative_eq!((PI / 2.0).sin() * (PI).cos(), -1.0);
        let s2 = builtin_source("example2", &GridSpec::new(4.0 * PI, 8, 2).unwrap()).unwrap();
        assert_relative_eq!(s2.values()[1], -1.0, epsilon = 1e-15);
        assert!(builtin_source("example4", &g).is_err());
    }

    #[test]
    fn example3_levels_on_default_grid() {
        let s = builtin_source("example3", &grid()).unwrap();
        let v = s.values();
        assert_eq!(v[19], 0.0);
        assert_eq!(v[20], 2.0);
        assert_eq!(v[39], 2.0);
        assert_eq!(v[40], 0.5);
        assert_eq!(v[60], 1.5);
        assert_eq!(v[79], 1.5);
        assert_eq!(v[80], 0.0);
        assert_eq!(v[100], 0.0);
    }

    #[test]
    fn custom_file() {
        let g = GridSpec::new(1.0, 3, 2).unwrap();
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "t,f\n0,0\n0.33,1.5\n0.66,-2\n1,0.25").unwrap();
        let s = read_source_file(file.path(), &g).unwrap();
        assert_eq!(s.values(), &[0.0, 1.5, -2.0, 0.25]);
        let mut bad = tempfile::NamedTempFile::new().unwrap();
        writeln!(bad, "1\n2\n3\n4").unwrap();
        assert!(read_source_file(bad.path(), &g).is_err());
        let mut short = tempfile::NamedTempFile::new().unwrap();
        writeln!(short, "0\n2").unwrap();
        assert!(read_source_file(short.path(), &g).is_err());
    }
}
