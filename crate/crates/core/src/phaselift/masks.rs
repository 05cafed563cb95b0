use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{substream, Stage};

/// Diagonal 0/1 illumination patterns; pattern 0 is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskSet {
    masks: Vec<Vec<f64>>,
    seed: u64,
}

impl MaskSet {
    /// Check the invariants on user supplied patterns.
    pub fn from_patterns(masks: Vec<Vec<f64>>, seed: u64) -> Result<Self> {
        let len = masks.first().map(Vec::len).unwrap_or(0);
        if len == 0 {
            return Err(Error::invalid("masks", "need at least one non-empty pattern"));
        }
        if masks[0].iter().any(|&v| v != 1.0) {
            return Err(Error::invalid("masks", "the first pattern must be all ones"));
        }
        for m in &masks {
            if m.len() != len {
                return Err(Error::LengthMismatch {
                    what: "mask pattern",
                    expected: len,
                    found: m.len(),
                });
            }
            if m.iter().any(|&v| v != 0.0 && v != 1.0) || m.iter().all(|&v| v == 0.0) {
                return Err(Error::invalid("masks", "patterns are 0/1 with at least one 1"));
            }
        }
        Ok(Self { masks, seed })
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn signal_len(&self) -> usize {
        self.masks[0].len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn get(&self, i: usize) -> &[f64] {
        &self.masks[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.masks.iter().map(Vec::as_slice)
    }

    /// `mask_i * f` entrywise.
    pub fn apply(&self, i: usize, f: &[f64]) -> Vec<f64> {
        self.masks[i].iter().zip(f).map(|(m, v)| m * v).collect()
    }
}

/// Identity plus `count - 1` Bernoulli(1/2) patterns; an all-zero draw is
/// repeated.
pub fn make_masks(length: usize, count: usize, seed: u64) -> Result<MaskSet> {
    if count == 0 {
        return Err(Error::invalid("N_m", "at least one mask is required"));
    }
    if length == 0 {
        return Err(Error::invalid("length", "masks must be non-empty"));
    }
    let mut masks = vec![vec![1.0; length]];
    for i in 1..count {
        let mut rng = substream(seed, Stage::Masks, 0, i as u64);
        loop {
            let m: Vec<f64> = (0..length)
                .map(|_| if rng.random_bool(0.5) { 1.0 } else { 0.0 })
                .collect();
            if m.contains(&1.0) {
                masks.push(m);
                break;
            }
        }
    }
    Ok(MaskSet { masks, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_only() {
        let m = make_masks(10, 1, 3).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.get(0), &[1.0; 10]);
    }

    #[test]
    fn deterministic() {
        assert_eq!(make_masks(33, 20, 5).unwrap(), make_masks(33, 20, 5).unwrap());
        assert_ne!(make_masks(33, 20, 5).unwrap(), make_masks(33, 20, 6).unwrap());
    }

    #[test]
    fn never_all_zero() {
        let m = make_masks(1, 200, 1).unwrap();
        assert!(m.iter().all(|p| p == [1.0]));
    }

    #[test]
    fn density_is_one_half() {
        let len = 16;
        let m = make_masks(len, 10_001, 77).unwrap();
        let total = (10_000 * len) as f64;
        let ones: f64 = m.iter().skip(1).map(|p| p.iter().sum::<f64>()).sum();
        let se = (0.25 / total).sqrt();
        // the redraw rule shifts the mean by at most 2^-16
        assert!((ones / total - 0.5).abs() < 3.0 * se + 1e-4);
    }

    #[test]
    fn validates_patterns() {
        assert!(MaskSet::from_patterns(vec![vec![1.0, 1.0], vec![0.0, 1.0]], 0).is_ok());
        assert!(MaskSet::from_patterns(vec![vec![1.0, 0.0]], 0).is_err());
        assert!(MaskSet::from_patterns(vec![vec![1.0, 1.0], vec![0.0, 0.0]], 0).is_err());
        assert!(MaskSet::from_patterns(vec![vec![1.0, 1.0], vec![0.5, 1.0]], 0).is_err());
        assert!(make_masks(4, 0, 0).is_err());
    }
}
