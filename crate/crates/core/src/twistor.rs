//! Twistor space `P^{2n+1}(C)` minus `P^{2n-1}`, its fibration over `H^n`
//! and the lines `L_Sigma` attached to points of `M_{2n x 2}(C)`.

use serde::{Deserialize, Serialize};

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::hull::{Membership, ZERO_TOL};
use crate::quat::{BiquaternionPoint, CMatrix, Quaternion, QuatVec, C64};
use crate::sphere::{nelder_mead_2d, Refinement};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// A point of projective space, stored with unit norm and its first
/// nonzero coordinate real and positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwistorPoint {
    pub coords: Vec<C64>,
}

impl TwistorPoint {
    pub fn new(coords: Vec<C64>) -> Result<Self> {
        let norm = coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroHomogeneous);
        }
        let lead = coords
            .iter()
            .find(|c| c.norm() > 1e-14 * norm)
            .copied()
            .unwrap_or(ONE);
        let phase = lead / lead.norm();
        let scale = (phase * norm).inv();
        Ok(Self {
            coords: coords.into_iter().map(|c| c * scale).collect(),
        })
    }

    /// Quaternionic dimension `n` of the base.
    pub fn n(&self) -> usize {
        (self.coords.len() - 2) / 2
    }

    /// `sqrt(1 - |<a, b>|^2)`, the sine of the Fubini-Study angle, computed
    /// as `|a ^ b|` to avoid cancellation near zero.
    pub fn projective_distance(&self, other: &Self) -> f64 {
        wedge_norm(&self.coords, &other.coords)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.coords.len() == other.coords.len() && self.projective_distance(other) <= tol
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    /// `Z_0 != 0`, fibre coordinate `z = Z_1 / Z_0`.
    Zero,
    /// `Z_1 != 0`, fibre coordinate `w = Z_0 / Z_1`.
    One,
}

/// A point of `CP^1 x H^n` in one of the two standard charts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberPoint {
    pub chart: Chart,
    pub fiber: C64,
    pub base: QuatVec,
}

impl FiberPoint {
    pub fn new(chart: Chart, fiber: C64, base: QuatVec) -> Self {
        Self { chart, fiber, base }
    }

    /// The same point in the other chart, when it lies in the overlap.
    pub fn to_chart(&self, target: Chart) -> Result<Self> {
        if self.chart == target {
            return Ok(self.clone());
        }
        if self.fiber == ZERO {
            return Err(Error::OutsideCharts);
        }
        Ok(Self {
            chart: target,
            fiber: self.fiber.inv(),
            base: self.base.clone(),
        })
    }

    /// The fibre as a homogeneous pair `(pi0, pi1)`.
    pub fn pi(&self) -> (C64, C64) {
        match self.chart {
            Chart::Zero => (ONE, self.fiber),
            Chart::One => (self.fiber, ONE),
        }
    }
}

/// Unnormalised homogeneous coordinates of `eta(fp)`.
pub fn eta_homogeneous(fp: &FiberPoint) -> Vec<C64> {
    let mut out = Vec::with_capacity(2 + 2 * fp.base.n());
    let (p0, p1) = fp.pi();
    out.push(p0);
    out.push(p1);
    for q in &fp.base.0 {
        let (a, b) = q.to_pair();
        match fp.chart {
            Chart::Zero => {
                let z = fp.fiber;
                out.push(a - z * b.conj());
                out.push(b + z * a.conj());
            }
            Chart::One => {
                let w = fp.fiber;
                out.push(w * a - b.conj());
                out.push(w * b + a.conj());
            }
        }
    }
    out
}

pub fn eta(fp: &FiberPoint) -> Result<TwistorPoint> {
    TwistorPoint::new(eta_homogeneous(fp))
}

/// Base point of the chart-0 twistor `[1 : z : u]`.
pub fn chart0_base(z: C64, u: &[C64]) -> QuatVec {
    let s = 1.0 / (1.0 + z.norm_sqr());
    QuatVec(
        u.chunks_exact(2)
            .map(|c| Quaternion::from_pair((c[0] + z * c[1].conj()) * s, (c[1] - z * c[0].conj()) * s))
            .collect(),
    )
}

/// Base point of the chart-1 twistor `[w : 1 : v]`.
pub fn chart1_base(w: C64, v: &[C64]) -> QuatVec {
    let s = 1.0 / (1.0 + w.norm_sqr());
    QuatVec(
        v.chunks_exact(2)
            .map(|c| {
                Quaternion::from_pair(
                    (c[1].conj() + w.conj() * c[0]) * s,
                    (-c[0].conj() + w.conj() * c[1]) * s,
                )
            })
            .collect(),
    )
}

/// `eta^{-1}` in a prescribed chart.
pub fn eta_inverse_in(tp: &TwistorPoint, chart: Chart) -> Result<FiberPoint> {
    if tp.coords.len() < 4 || !tp.coords.len().is_multiple_of(2) {
        return Err(Error::Config(format!(
            "twistor needs 2n + 2 coordinates, got {}",
            tp.coords.len()
        )));
    }
    let c = &tp.coords;
    let lead = match chart {
        Chart::Zero => c[0],
        Chart::One => c[1],
    };
    if lead.norm() < 1e-14 {
        return Err(Error::OutsideCharts);
    }
    let inv = lead.inv();
    let rest: Vec<C64> = c[2..].iter().map(|v| v * inv).collect();
    Ok(match chart {
        Chart::Zero => {
            let z = c[1] * inv;
            FiberPoint::new(Chart::Zero, z, chart0_base(z, &rest))
        }
        Chart::One => {
            let w = c[0] * inv;
            FiberPoint::new(Chart::One, w, chart1_base(w, &rest))
        }
    })
}

/// `eta^{-1}` in the better-conditioned chart.
pub fn eta_inverse(tp: &TwistorPoint) -> Result<FiberPoint> {
    if tp.coords.len() < 2 {
        return Err(Error::OutsideCharts);
    }
    let chart = if tp.coords[0].norm() >= tp.coords[1].norm() {
        Chart::Zero
    } else {
        Chart::One
    };
    eta_inverse_in(tp, chart)
}

/// Unnormalised `[pi0 : pi1 : pi0 Sigma_0 + pi1 Sigma_1]`.
pub fn line_homogeneous(sigma: &CMatrix, pi: (C64, C64)) -> Vec<C64> {
    let mut out = vec![pi.0, pi.1];
    out.extend(sigma.rows.iter().map(|r| pi.0 * r[0] + pi.1 * r[1]));
    out
}

/// The point of `L_Sigma` over `[pi0 : pi1]`.
pub fn line_embed(sigma: &CMatrix, pi: (C64, C64)) -> Result<TwistorPoint> {
    TwistorPoint::new(line_homogeneous(sigma, pi))
}

/// The unit imaginary quaternion `(|a|^2 - |b|^2) i + 2 j conj(a) b` for a
/// unit pair `(a, b)`.
pub fn hopf_quaternion(pi: (C64, C64)) -> Quaternion {
    let norm = (pi.0.norm_sqr() + pi.1.norm_sqr()).sqrt();
    let (a, b) = (pi.0 / norm, pi.1 / norm);
    Quaternion::I * (a.norm_sqr() - b.norm_sqr()) + Quaternion::J * Quaternion::from_complex(a.conj() * b * 2.0)
}

/// The sphere `x + y q(pi)` at the given fibre points, from the closed form.
pub fn line_sweep(sigma: &BiquaternionPoint, grid: &[(C64, C64)]) -> Vec<QuatVec> {
    grid.iter()
        .map(|&pi| sigma.slice_point(hopf_quaternion(pi)))
        .collect()
}

/// `pi_tau(eta^{-1}(point of L_Sigma over pi))`, computed through the line.
pub fn sweep_point_via_line(sigma: &CMatrix, pi: (C64, C64)) -> Result<QuatVec> {
    Ok(eta_inverse(&line_embed(sigma, pi)?)?.base)
}

/// `[sqrt t : sqrt(1 - t) e^{i phi}]` on a `t x phi` grid, plus both poles.
pub fn hopf_grid(n_t: usize, n_phi: usize) -> Vec<(C64, C64)> {
    let mut out = vec![(ONE, ZERO), (ZERO, ONE)];
    for i in 0..n_t {
        let t = (i as f64 + 0.5) / n_t as f64;
        for j in 0..n_phi {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64;
            out.push((C64::new(t.sqrt(), 0.0), C64::from_polar((1.0 - t).sqrt(), phi)));
        }
    }
    out
}

fn wedge_norm(a: &[C64], b: &[C64]) -> f64 {
    let na = a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let nb = b.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let mut acc = 0.0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            acc += (a[i] * b[j] - a[j] * b[i]).norm_sqr();
        }
    }
    acc.sqrt() / (na * nb)
}

fn fs_distance(a: (C64, C64), b: (C64, C64)) -> f64 {
    wedge_norm(&[a.0, a.1], &[b.0, b.1])
}

/// Grid of fibre points used by `hull_contains_via_lines`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberGrid {
    pub nodes: Vec<(C64, C64)>,
    /// Covering radius in the `sqrt(1 - |<a, b>|^2)` metric.
    pub cover_radius: f64,
    pub refinement: Refinement,
    pub zero_tol: f64,
}

impl FiberGrid {
    pub fn hopf(n_t: usize, n_phi: usize) -> Result<Self> {
        let nodes = hopf_grid(n_t, n_phi);
        if nodes.len() < 12 {
            return Err(Error::SamplerTooSmall(nodes.len()));
        }
        use rayon::prelude::*;
        let probes: Vec<(C64, C64)> = hopf_grid(3 * n_t + 1, 3 * n_phi + 1)
            .into_iter()
            .map(|(a, b)| (a, b * C64::from_polar(1.0, 0.37)))
            .collect();
        let worst = probes
            .par_iter()
            .map(|p| nodes.iter().map(|q| fs_distance(*p, *q)).fold(f64::INFINITY, f64::min))
            .reduce(|| 0.0, f64::max);
        Ok(Self {
            nodes,
            cover_radius: 1.25 * worst,
            refinement: Refinement::default(),
            zero_tol: ZERO_TOL,
        })
    }
}

impl Default for FiberGrid {
    fn default() -> Self {
        Self::hopf(16, 32).expect("grid is above the minimum size")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineHullQuery {
    pub verdict: bool,
    pub membership: Membership,
    pub inf_value: f64,
    pub margin: f64,
    pub argmin_pi: (C64, C64),
    pub argmin_point: QuatVec,
    pub band: f64,
}

/// Decides `sigma in H(U)` by sweeping the base points of `L_Sigma`.
pub fn hull_contains_via_lines(
    sigma: &BiquaternionPoint,
    u: &dyn Domain,
    grid: &FiberGrid,
) -> Result<LineHullQuery> {
    use rayon::prelude::*;
    if u.dim() != sigma.n() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            got: sigma.n(),
        });
    }
    let m = sigma.to_matrix();
    let f = |pi: (C64, C64)| -> f64 {
        match sweep_point_via_line(&m, pi) {
            Ok(p) => u.signed_margin(&p),
            Err(_) => f64::NAN,
        }
    };
    let values: Vec<f64> = grid.nodes.par_iter().map(|pi| f(*pi)).collect();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut best = (grid.nodes[order[0]], values[order[0]]);
    let starts: Vec<usize> = order.iter().copied().take(grid.refinement.starts).collect();
    let refined: Vec<((C64, C64), f64)> = starts
        .par_iter()
        .map(|&i| {
            let (p0, p1) = grid.nodes[i];
            let to_pi = |c: C64, d: [f64; 2]| -> (C64, C64) {
                let v = c + C64::new(d[0], d[1]);
                if p0.norm() >= p1.norm() {
                    (ONE, v)
                } else {
                    (v, ONE)
                }
            };
            let centre = if p0.norm() >= p1.norm() { p1 / p0 } else { p0 / p1 };
            let (d, v) = nelder_mead_2d(
                |d| f(to_pi(centre, d)),
                [0.0, 0.0],
                (2.0 * grid.cover_radius).min(0.5),
                grid.refinement.max_iter,
                grid.refinement.xtol,
            );
            (to_pi(centre, d), v)
        })
        .collect();
    for (pi, v) in refined {
        if v < best.1 {
            best = (pi, v);
        }
    }
    let margin = best.1;
    let band = 4.0 * sigma.y.norm() * grid.cover_radius;
    let verdict = margin > grid.zero_tol;
    let membership = if !verdict {
        Membership::Outside
    } else if margin >= band {
        Membership::Inside
    } else {
        Membership::Indeterminate
    };
    Ok(LineHullQuery {
        verdict,
        membership,
        inf_value: margin.max(0.0),
        margin,
        argmin_pi: best.0,
        argmin_point: sweep_point_via_line(&m, best.0)?,
        band,
    })
}
