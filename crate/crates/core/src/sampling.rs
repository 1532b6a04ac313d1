//! Seeded random points. Every stochastic routine in the crate draws from a
//! `ChaCha8Rng` built here so runs are reproducible from a single `u64`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::quat::{BiquaternionPoint, Quaternion, QuatVec, C64};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_coords<R: Rng>(len: usize, rng: &mut R) -> Vec<f64> {
    (0..len).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Coordinates i.i.d. uniform in `[-scale, scale]`.
pub fn random_quat_vec<R: Rng>(n: usize, scale: f64, rng: &mut R) -> QuatVec {
    QuatVec(
        (0..n)
            .map(|_| {
                Quaternion::new(
                    rng.random_range(-scale..=scale),
                    rng.random_range(-scale..=scale),
                    rng.random_range(-scale..=scale),
                    rng.random_range(-scale..=scale),
                )
            })
            .collect(),
    )
}

/// Uniform direction on the unit sphere of `R^{4n}`.
pub fn random_direction<R: Rng>(n: usize, rng: &mut R) -> QuatVec {
    loop {
        let g = gaussian_coords(4 * n, rng);
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-12 {
            let unit: Vec<f64> = g.iter().map(|v| v / norm).collect();
            return QuatVec::from_coords(&unit).expect("length is a multiple of 4");
        }
    }
}

/// Uniform (by volume) in the shell `r_min <= |p| <= r_max` of `R^{4n}`.
pub fn sample_shell<R: Rng>(n: usize, r_min: f64, r_max: f64, count: usize, rng: &mut R) -> Vec<QuatVec> {
    let d = (4 * n) as i32;
    let lo = r_min.powi(d);
    let hi = r_max.powi(d);
    (0..count)
        .map(|_| {
            let u: f64 = rng.random();
            let r = (lo + u * (hi - lo)).powf(1.0 / d as f64);
            random_direction(n, rng).scale(r)
        })
        .collect()
}

/// Uniform unit imaginary quaternion.
pub fn random_unit_imaginary<R: Rng>(rng: &mut R) -> Quaternion {
    loop {
        let g = gaussian_coords(3, rng);
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return Quaternion::imaginary([g[0] / norm, g[1] / norm, g[2] / norm]);
        }
    }
}

pub fn random_complex<R: Rng>(scale: f64, rng: &mut R) -> C64 {
    C64::new(rng.random_range(-scale..=scale), rng.random_range(-scale..=scale))
}

pub fn random_biquat<R: Rng>(n: usize, scale: f64, rng: &mut R) -> BiquaternionPoint {
    let x = random_quat_vec(n, scale, rng);
    let y = random_quat_vec(n, scale, rng);
    BiquaternionPoint { x, y }
}

/// Uniform homogeneous pair on the unit sphere of `C^2`.
pub fn random_pi<R: Rng>(rng: &mut R) -> (C64, C64) {
    let g = gaussian_coords(4, rng);
    let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    (
        C64::new(g[0] / norm, g[1] / norm),
        C64::new(g[2] / norm, g[3] / norm),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_points() {
        let a = sample_shell(2, 0.5, 2.0, 10, &mut seeded(3));
        let b = sample_shell(2, 0.5, 2.0, 10, &mut seeded(3));
        assert_eq!(a, b);
        for p in &a {
            let r = p.norm();
            assert!((0.5..=2.0 + 1e-12).contains(&r));
        }
    }

    #[test]
    fn unit_imaginary_is_unit_and_imaginary() {
        let mut rng = seeded(1);
        for _ in 0..100 {
            let q = random_unit_imaginary(&mut rng);
            assert_eq!(q.re(), 0.0);
            assert!((q.norm() - 1.0).abs() < 1e-14);
        }
    }
}
