//! Quadrature of `(1/pi) int_C g dA` on a compactified polar grid:
//! `z = s rho / (1 - rho) e^{i phi}`, composite Gauss-Legendre in `rho` and
//! the trapezoid rule in `phi`, refined until successive levels agree.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::C64;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let m = order;
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Three-term recurrence for P_m and its derivative.
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pm = if m == 0 { 1.0 } else if m == 1 { x } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = m as f64 * (x * pm - pm1) / (x * x - 1.0);
            let dx = pm / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub radial_panels: usize,
    /// Gauss-Legendre nodes per panel.
    pub radial_order: usize,
    pub angular_nodes: usize,
    /// `s` in `|z| = s rho / (1 - rho)`.
    pub scale: f64,
    /// Target for the change between two successive refinements.
    pub tol: f64,
    /// Refinements allowed after the first level.
    pub max_levels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            radial_panels: 8,
            radial_order: 8,
            angular_nodes: 32,
            scale: 1.0,
            tol: 1e-11,
            max_levels: 5,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.radial_panels * self.radial_order < 8 || self.angular_nodes < 8 {
            return Err(Error::Config("quadrature needs at least 8 radial and 8 angular nodes".into()));
        }
        if self.scale.is_nan() || self.scale <= 0.0 || self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::Config("quadrature scale and tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Integral {
    pub values: Vec<C64>,
    /// Largest change between the last two levels.
    pub change: f64,
    /// Refinement level of `values`; level `L` uses `2^L` times the base panels and angles.
    pub level: usize,
    pub nodes: usize,
}

/// One fixed level of the product rule.
pub fn quadrature_level<G>(g: &G, dim: usize, panels: usize, order: usize, angular: usize, scale: f64) -> Vec<C64>
where
    G: Fn(C64) -> Vec<C64> + Sync,
{
    let (x, w) = gauss_legendre(order);
    let dphi = 2.0 * std::f64::consts::PI / angular as f64;
    let rot: Vec<C64> = (0..angular).map(|j| C64::from_polar(1.0, dphi * j as f64)).collect();
    let partial: Vec<Vec<C64>> = (0..panels)
        .into_par_iter()
        .map(|p| {
            let lo = p as f64 / panels as f64;
            let half = 0.5 / panels as f64;
            let mut acc = vec![C64::new(0.0, 0.0); dim];
            for (xi, wi) in x.iter().zip(&w) {
                let rho = lo + half * (xi + 1.0);
                let r = scale * rho / (1.0 - rho);
                // (1/pi) r dr dphi with dr = s drho / (1 - rho)^2
                let weight = wi * half * r * scale / ((1.0 - rho) * (1.0 - rho)) * dphi / std::f64::consts::PI;
                for e in &rot {
                    let v = g(e * r);
                    for (a, b) in acc.iter_mut().zip(&v) {
                        *a += b * weight;
                    }
                }
            }
            acc
        })
        .collect();
    partial.into_iter().fold(vec![C64::new(0.0, 0.0); dim], |mut s, v| {
        for (a, b) in s.iter_mut().zip(&v) {
            *a += b;
        }
        s
    })
}

/// `(1/pi) int_C g dA` for a vector-valued `g` with `dim` components.
pub fn quadrature_c_vec<G>(g: G, dim: usize, cfg: &QuadratureConfig) -> Result<Integral>
where
    G: Fn(C64) -> Vec<C64> + Sync,
{
    cfg.validate()?;
    let mut prev = quadrature_level(&g, dim, cfg.radial_panels, cfg.radial_order, cfg.angular_nodes, cfg.scale);
    let mut change = f64::INFINITY;
    for level in 1..=cfg.max_levels {
        let panels = cfg.radial_panels << level;
        let angular = cfg.angular_nodes << level;
        let next = quadrature_level(&g, dim, panels, cfg.radial_order, angular, cfg.scale);
        change = prev
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let size = next.iter().map(|v| v.norm()).fold(1.0, f64::max);
        if !change.is_finite() {
            break;
        }
        if change <= cfg.tol * size {
            return Ok(Integral {
                values: next,
                change,
                level,
                nodes: panels * cfg.radial_order * angular,
            });
        }
        prev = next;
    }
    Err(Error::QuadratureDiverged { change, tol: cfg.tol })
}

/// The product rule at a fixed refinement level.
pub fn quadrature_at_level<G>(g: G, dim: usize, cfg: &QuadratureConfig, level: usize) -> Result<Vec<C64>>
where
    G: Fn(C64) -> Vec<C64> + Sync,
{
    cfg.validate()?;
    Ok(quadrature_level(
        &g,
        dim,
        cfg.radial_panels << level,
        cfg.radial_order,
        cfg.angular_nodes << level,
        cfg.scale,
    ))
}

/// Scalar version of [`quadrature_c_vec`].
pub fn quadrature_c<G>(g: G, cfg: &QuadratureConfig) -> Result<C64>
where
    G: Fn(C64) -> C64 + Sync,
{
    Ok(quadrature_c_vec(|z| vec![g(z)], 1, cfg)?.values[0])
}
