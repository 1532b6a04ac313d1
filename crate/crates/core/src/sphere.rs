//! Minimisation over the 2-sphere of unit imaginary quaternions: a grid pass
//! followed by Nelder-Mead refinement in local charts.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn normalize(a: Vec3) -> Vec3 {
    let n = dot(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

fn chord(a: Vec3, b: Vec3) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    dot(d, d).sqrt()
}

/// Fibonacci lattice with `count` nodes.
pub fn fibonacci_sphere(count: usize) -> Vec<Vec3> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// Largest chord distance from a dense probe set to the nearest node,
/// inflated by 25% to absorb what the probe misses.
pub fn covering_radius(nodes: &[Vec3]) -> f64 {
    let probes = fibonacci_sphere(8 * nodes.len() + 101);
    let worst = probes
        .par_iter()
        .map(|p| nodes.iter().map(|n| chord(*p, *n)).fold(f64::INFINITY, f64::min))
        .reduce(|| 0.0, f64::max);
    1.25 * worst
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    /// Grid nodes used as Nelder-Mead starts.
    pub starts: usize,
    pub max_iter: usize,
    /// Stop once the simplex is smaller than this.
    pub xtol: f64,
}

impl Default for Refinement {
    fn default() -> Self {
        Self {
            starts: 4,
            max_iter: 400,
            xtol: 1e-13,
        }
    }
}

/// Nelder-Mead in two variables. Returns the best vertex and its value.
pub fn nelder_mead_2d<F: Fn([f64; 2]) -> f64>(
    f: F,
    start: [f64; 2],
    size: f64,
    max_iter: usize,
    xtol: f64,
) -> ([f64; 2], f64) {
    let mut simplex = [
        start,
        [start[0] + size, start[1]],
        [start[0], start[1] + size],
    ];
    let mut vals = simplex.map(&f);
    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    for _ in 0..max_iter {
        let mut idx = [0, 1, 2];
        idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        simplex = idx.map(|i| simplex[i]);
        vals = idx.map(|i| vals[i]);
        let spread = chord2(simplex[0], simplex[1]).max(chord2(simplex[0], simplex[2]));
        if spread < xtol {
            break;
        }
        let centroid = lerp(simplex[0], simplex[1], 0.5);
        let reflected = lerp(centroid, simplex[2], -1.0);
        let fr = f(reflected);
        if fr < vals[0] {
            let expanded = lerp(centroid, simplex[2], -2.0);
            let fe = f(expanded);
            if fe < fr {
                simplex[2] = expanded;
                vals[2] = fe;
            } else {
                simplex[2] = reflected;
                vals[2] = fr;
            }
        } else if fr < vals[1] {
            simplex[2] = reflected;
            vals[2] = fr;
        } else {
            let contracted = if fr < vals[2] {
                lerp(centroid, reflected, 0.5)
            } else {
                lerp(centroid, simplex[2], 0.5)
            };
            let fc = f(contracted);
            if fc < vals[2].min(fr) {
                simplex[2] = contracted;
                vals[2] = fc;
            } else {
                for k in 1..3 {
                    simplex[k] = lerp(simplex[0], simplex[k], 0.5);
                    vals[k] = f(simplex[k]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
    (simplex[best], vals[best])
}

fn chord2(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Orthonormal tangent basis at a unit vector.
fn tangent_basis(u: Vec3) -> (Vec3, Vec3) {
    let seed = if u[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = dot(seed, u);
    let e1 = normalize([seed[0] - d * u[0], seed[1] - d * u[1], seed[2] - d * u[2]]);
    let e2 = [
        u[1] * e1[2] - u[2] * e1[1],
        u[2] * e1[0] - u[0] * e1[2],
        u[0] * e1[1] - u[1] * e1[0],
    ];
    (e1, e2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereMin {
    pub argmin: Vec3,
    pub value: f64,
    /// Minimum over the grid nodes alone.
    pub grid_value: f64,
}

/// Grid-plus-refinement minimiser on `S^2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereSearch {
    pub nodes: Vec<Vec3>,
    /// Chord covering radius of `nodes`.
    pub cover_radius: f64,
    pub refinement: Refinement,
}

impl SphereSearch {
    pub fn fibonacci(count: usize) -> Result<Self> {
        Self::from_nodes(fibonacci_sphere(count))
    }

    pub fn from_nodes(nodes: Vec<Vec3>) -> Result<Self> {
        if nodes.len() < 12 {
            return Err(Error::SamplerTooSmall(nodes.len()));
        }
        let nodes: Vec<Vec3> = nodes.into_iter().map(normalize).collect();
        let cover_radius = covering_radius(&nodes);
        Ok(Self {
            nodes,
            cover_radius,
            refinement: Refinement::default(),
        })
    }

    pub fn minimize<F: Fn(Vec3) -> f64 + Sync>(&self, f: F) -> SphereMin {
        let values: Vec<f64> = self.nodes.par_iter().map(|u| f(*u)).collect();
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        let grid_value = values[order[0]];
        let mut best = SphereMin {
            argmin: self.nodes[order[0]],
            value: grid_value,
            grid_value,
        };
        let starts: Vec<usize> = order.iter().copied().take(self.refinement.starts).collect();
        let refined: Vec<(Vec3, f64)> = starts
            .par_iter()
            .map(|&i| {
                let u = self.nodes[i];
                let (e1, e2) = tangent_basis(u);
                let chart = |p: [f64; 2]| {
                    normalize([
                        u[0] + p[0] * e1[0] + p[1] * e2[0],
                        u[1] + p[0] * e1[1] + p[1] * e2[1],
                        u[2] + p[0] * e1[2] + p[1] * e2[2],
                    ])
                };
                let (p, v) = nelder_mead_2d(
                    |p| f(chart(p)),
                    [0.0, 0.0],
                    self.cover_radius.min(0.5),
                    self.refinement.max_iter,
                    self.refinement.xtol,
                );
                (chart(p), v)
            })
            .collect();
        for (u, v) in refined {
            if v < best.value {
                best.value = v;
                best.argmin = u;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_nodes_are_unit_and_cover() {
        let nodes = fibonacci_sphere(512);
        assert!(nodes.iter().all(|u| (dot(*u, *u) - 1.0).abs() < 1e-12));
        let r = covering_radius(&nodes);
        // Area argument: 512 caps of chord radius r must cover 4 pi.
        assert!(r > (4.0 / 512.0f64).sqrt());
        assert!(r < 0.2);
    }

    #[test]
    fn too_few_nodes() {
        assert_eq!(SphereSearch::fibonacci(11), Err(Error::SamplerTooSmall(11)));
    }

    #[test]
    fn finds_linear_minimum() {
        let s = SphereSearch::fibonacci(64).unwrap();
        let target = normalize([0.3, -0.7, 0.2]);
        let m = s.minimize(|u| dot(u, target));
        assert!((m.value + 1.0).abs() < 1e-12);
        assert!(chord(m.argmin, [-target[0], -target[1], -target[2]]) < 1e-5);
    }

    #[test]
    fn finds_cone_minimum() {
        let s = SphereSearch::fibonacci(64).unwrap();
        let target = normalize([0.1, 0.2, -0.9]);
        let m = s.minimize(|u| chord(u, target));
        assert!(m.value < 1e-10, "{}", m.value);
    }
}
