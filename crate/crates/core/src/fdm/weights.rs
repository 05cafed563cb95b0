use crate::error::{Error, Result};

/// `a_l = (l + 1)^{1-alpha} - l^{1-alpha}` for `l = 0..=len`, `alpha in (0, 1)`.
pub fn caputo_weights_a(alpha: f64, len: usize) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid("alpha", format!("{alpha} is outside (0, 1)")));
    }
    Ok(power_differences(1.0 - alpha, len))
}

/// `b_l = (l + 1)^{2-alpha} - l^{2-alpha}` for `l = 0..=len`, `alpha in (1, 2)`.
pub fn caputo_weights_b(alpha: f64, len: usize) -> Result<Vec<f64>> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::invalid("alpha", format!("{alpha} is outside (1, 2)")));
    }
    Ok(power_differences(2.0 - alpha, len))
}

fn power_differences(p: f64, len: usize) -> Vec<f64> {
    (0..=len)
        .map(|l| {
            let l = l as f64;
            (l + 1.0).powf(p) - l.powf(p)
        })
        .collect()
}
