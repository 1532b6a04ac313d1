//! One-dimensional finite differences shared by every derivative in the crate.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Second-order central difference.
    #[default]
    Central,
    /// Richardson extrapolation of two central differences, fourth order.
    Richardson,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FdConfig {
    /// Absolute step. `None` picks `1e-5 * max(1, |p|)`.
    pub step: Option<f64>,
    pub scheme: Scheme,
}

impl FdConfig {
    pub fn central(step: f64) -> Self {
        Self {
            step: Some(step),
            scheme: Scheme::Central,
        }
    }

    pub fn richardson(step: f64) -> Self {
        Self {
            step: Some(step),
            scheme: Scheme::Richardson,
        }
    }

    pub fn step_at(&self, scale: f64) -> Result<f64> {
        let h = self.step.unwrap_or(1e-5 * scale.max(1.0));
        if h > 0.0 && h.is_finite() {
            Ok(h)
        } else {
            Err(Error::Config(format!("finite-difference step must be positive, got {h}")))
        }
    }
}

/// Anything finite differences can combine.
pub trait FdValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}

impl<T> FdValue for T where T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T> {}

/// Derivative at `t = 0` of `t -> f(t)`.
pub fn derivative<V, F>(mut f: F, h: f64, scheme: Scheme) -> Result<V>
where
    V: FdValue,
    F: FnMut(f64) -> Result<V>,
{
    let mut central = |h: f64| -> Result<V> { Ok((f(h)? - f(-h)?) * (0.5 / h)) };
    match scheme {
        Scheme::Central => central(h),
        Scheme::Richardson => {
            let coarse = central(h)?;
            let fine = central(0.5 * h)?;
            Ok((fine * 4.0 - coarse) * (1.0 / 3.0))
        }
    }
}

/// [`derivative`] for vector values of a fixed length.
pub fn derivative_vec<F>(mut f: F, h: f64, scheme: Scheme) -> Result<Vec<crate::quat::C64>>
where
    F: FnMut(f64) -> Result<Vec<crate::quat::C64>>,
{
    let mut central = |h: f64| -> Result<Vec<crate::quat::C64>> {
        let (p, m) = (f(h)?, f(-h)?);
        Ok(p.iter().zip(&m).map(|(a, b)| (a - b) * (0.5 / h)).collect())
    };
    match scheme {
        Scheme::Central => central(h),
        Scheme::Richardson => {
            let coarse = central(h)?;
            let fine = central(0.5 * h)?;
            Ok(fine.iter().zip(&coarse).map(|(a, b)| (a * 4.0 - b) * (1.0 / 3.0)).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_of_accuracy() {
        let f = |t: f64| -> Result<f64> { Ok((1.0 + t).exp()) };
        let exact = 1f64.exp();
        let c = derivative(f, 1e-3, Scheme::Central).unwrap();
        let r = derivative(f, 1e-3, Scheme::Richardson).unwrap();
        assert!((c - exact).abs() < 1e-6);
        assert!((r - exact).abs() < 1e-11);
        assert!((r - exact).abs() < (c - exact).abs());
    }

    #[test]
    fn rejects_bad_step() {
        assert!(FdConfig::central(0.0).step_at(1.0).is_err());
        assert!((FdConfig::default().step_at(10.0).unwrap() - 1e-4).abs() < 1e-18);
    }
}
