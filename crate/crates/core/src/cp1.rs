//! Line bundles `L_k` over `CP^1` in the charts `z` (on `X_0`) and
//! `w = 1/z` (on `X_1`): clutching checks, decay at infinity and the
//! coefficients that identify `H^1(CP^1, L_k)` with `C^{-k-1}`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{quadrature_c_vec, QuadratureConfig};
use crate::quat::C64;

pub type ScalarFn = Arc<dyn Fn(C64) -> C64 + Send + Sync>;

/// A smooth section of `L_k`, given by its two chart functions.
#[derive(Clone)]
pub struct BundleSection {
    pub k: i32,
    pub f0: ScalarFn,
    pub f1: ScalarFn,
}

/// A `(0,1)`-form with values in `L_k`: `h0 dz_bar` on `X_0`, `h1 dw_bar` on `X_1`.
#[derive(Clone)]
pub struct Form01 {
    pub k: i32,
    pub h0: ScalarFn,
    pub h1: ScalarFn,
}

impl fmt::Debug for BundleSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BundleSection").field("k", &self.k).finish_non_exhaustive()
    }
}

impl fmt::Debug for Form01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Form01").field("k", &self.k).finish_non_exhaustive()
    }
}

fn zpow(z: C64, p: i32) -> C64 {
    z.powi(p)
}

impl BundleSection {
    pub fn new(
        k: i32,
        f0: impl Fn(C64) -> C64 + Send + Sync + 'static,
        f1: impl Fn(C64) -> C64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            k,
            f0: Arc::new(f0),
            f1: Arc::new(f1),
        }
    }

    /// A section supported away from `z = infinity`; `f1` follows from clutching.
    pub fn compactly_supported(k: i32, f0: impl Fn(C64) -> C64 + Send + Sync + 'static) -> Self {
        let f0: ScalarFn = Arc::new(f0);
        let g = f0.clone();
        Self {
            k,
            f0,
            f1: Arc::new(move |w| if w == C64::new(0.0, 0.0) { w } else { zpow(w, k) * g(w.inv()) }),
        }
    }
}

impl Form01 {
    pub fn new(
        k: i32,
        h0: impl Fn(C64) -> C64 + Send + Sync + 'static,
        h1: impl Fn(C64) -> C64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            k,
            h0: Arc::new(h0),
            h1: Arc::new(h1),
        }
    }

    /// A form whose chart-0 coefficient decays fast enough that `h1(0) = 0`;
    /// `h1` follows from clutching.
    pub fn from_chart0(k: i32, h0: impl Fn(C64) -> C64 + Send + Sync + 'static) -> Self {
        let h0: ScalarFn = Arc::new(h0);
        let g = h0.clone();
        Self {
            k,
            h0,
            h1: Arc::new(move |w| {
                if w == C64::new(0.0, 0.0) {
                    w
                } else {
                    let z = w.inv();
                    -zpow(z, -k) * z.conj() * z.conj() * g(z)
                }
            }),
        }
    }

    /// Pointwise linear combination of two forms of the same degree.
    pub fn combine(&self, a: C64, other: &Form01, b: C64) -> Result<Form01> {
        if self.k != other.k {
            return Err(Error::Config(format!("degrees differ: {} and {}", self.k, other.k)));
        }
        let (f, g) = (self.clone(), other.clone());
        let (f1, g1) = (self.h1.clone(), other.h1.clone());
        Ok(Form01 {
            k: self.k,
            h0: Arc::new(move |z| a * (f.h0)(z) + b * (g.h0)(z)),
            h1: Arc::new(move |w| a * f1(w) + b * g1(w)),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClutchingReport {
    pub samples: usize,
    pub max_violation: f64,
    pub worst_z: C64,
}

impl ClutchingReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_violation <= tol
    }
}

/// Points on the annulus `0.1 <= |z| <= 10`: 9 radii, 16 angles.
pub fn annulus_sample() -> Vec<C64> {
    let mut out = Vec::new();
    for i in 0..9 {
        let r = 10f64.powf(-1.0 + 0.25 * i as f64);
        for j in 0..16 {
            let phi = 2.0 * std::f64::consts::PI * (j as f64 + 0.3) / 16.0;
            out.push(C64::from_polar(r, phi));
        }
    }
    out
}

fn clutching_report(sample: &[C64], violation: impl Fn(C64) -> f64) -> ClutchingReport {
    let mut rep = ClutchingReport {
        samples: sample.len(),
        max_violation: 0.0,
        worst_z: C64::new(0.0, 0.0),
    };
    for &z in sample {
        let v = violation(z);
        if v > rep.max_violation || v.is_nan() {
            rep.max_violation = if v.is_nan() { f64::INFINITY } else { v };
            rep.worst_z = z;
        }
    }
    rep
}

/// Largest `|f1(1/z) - z^{-k} f0(z)|` over the sample (relative once the
/// values exceed 1).
pub fn validate_section(s: &BundleSection, sample: &[C64]) -> ClutchingReport {
    clutching_report(sample, |z| {
        let rhs = zpow(z, -s.k) * (s.f0)(z);
        ((s.f1)(z.inv()) - rhs).norm() / rhs.norm().max(1.0)
    })
}

/// Largest `|h1(1/z) + z^{-k} z_bar^2 h0(z)|` over the sample.
pub fn validate_form(w: &Form01, sample: &[C64]) -> ClutchingReport {
    clutching_report(sample, |z| {
        let rhs = -zpow(z, -w.k) * z.conj() * z.conj() * (w.h0)(z);
        ((w.h1)(z.inv()) - rhs).norm() / rhs.norm().max(1.0)
    })
}

#[derive(Clone, Copy, Debug)]
pub enum DecayTarget<'a> {
    Section(&'a BundleSection),
    Form(&'a Form01),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Limit {
    Zero,
    Finite,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub expected: Limit,
    pub radii: [f64; 3],
    /// Largest `|z^l z_bar^m h0|` (or `|z^l f0|`) on each ring.
    pub magnitudes: [f64; 3],
    pub passed: bool,
}

/// Certifies `lim z^l f0(z)` (sections, `m = 0`) or `lim z^l z_bar^m h0(z)`
/// (forms) by sampling rings `|z| = 1e2, 1e3, 1e4`. The limit is zero when
/// `l < -k` (sections) or `l + m < -k + 2` (forms), and finite when `l = -k`
/// for sections.
pub fn decay_check(target: DecayTarget<'_>, l: i32, m: i32) -> Result<DecayReport> {
    let (k, g): (i32, Box<dyn Fn(C64) -> C64 + '_>) = match target {
        DecayTarget::Section(s) => {
            if l > -s.k || m != 0 {
                return Err(Error::InvalidExponent { k: s.k, l, m });
            }
            (s.k, Box::new(move |z: C64| zpow(z, l) * (s.f0)(z)))
        }
        DecayTarget::Form(w) => {
            if l + m >= -w.k + 2 || l < 0 || m < 0 {
                return Err(Error::InvalidExponent { k: w.k, l, m });
            }
            (w.k, Box::new(move |z: C64| zpow(z, l) * zpow(z.conj(), m) * (w.h0)(z)))
        }
    };
    let expected = match target {
        DecayTarget::Section(_) if l == -k => Limit::Finite,
        _ => Limit::Zero,
    };
    let radii = [1e2, 1e3, 1e4];
    let angles: Vec<C64> = (0..8)
        .map(|j| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (j as f64 + 0.1) / 8.0))
        .collect();
    let rings: Vec<Vec<C64>> = radii
        .iter()
        .map(|r| angles.iter().map(|e| g(e * *r)).collect())
        .collect();
    let mag = |ring: &[C64]| ring.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let magnitudes = [mag(&rings[0]), mag(&rings[1]), mag(&rings[2])];
    let finite = magnitudes.iter().all(|m| m.is_finite());
    let passed = finite
        && match expected {
            Limit::Zero => {
                magnitudes[2] <= 1e-12
                    || (magnitudes[2] <= 0.1 * magnitudes[0] && magnitudes[2] <= magnitudes[1])
            }
            Limit::Finite => {
                let scale = 1.0 + magnitudes[2];
                let cauchy = rings[1]
                    .iter()
                    .zip(&rings[2])
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                let spread = rings[2]
                    .iter()
                    .map(|v| (v - rings[2][0]).norm())
                    .fold(0.0, f64::max);
                cauchy <= 1e-2 * scale && spread <= 1e-2 * scale
            }
        };
    Ok(DecayReport {
        expected,
        radii,
        magnitudes,
        passed,
    })
}

/// `dim H^1(CP^1, L_k) = max(0, -k - 1)`.
pub fn h1_dimension(k: i32) -> usize {
    (-(k as i64) - 1).max(0) as usize
}

/// The coefficients `a_l = (1/pi) int z^l h0 dA` for `l = 0..-k-2`.
pub fn cohomology_coefficients(w: &Form01, cfg: &QuadratureConfig) -> Result<Vec<C64>> {
    if w.k > -2 {
        return Err(Error::TrivialCohomology { k: w.k });
    }
    let dim = h1_dimension(w.k);
    let h0 = w.h0.clone();
    let out = quadrature_c_vec(
        move |z| {
            let v = h0(z);
            let mut acc = Vec::with_capacity(dim);
            let mut p = v;
            for _ in 0..dim {
                acc.push(p);
                p *= z;
            }
            acc
        },
        dim,
        cfg,
    )?;
    Ok(out.values)
}

/// `2 (a0 + a1 z_bar) dz_bar / (1 + |z|^2)^3`, a `(0,1)`-form of degree -3
/// whose coefficients are `(a0, a1)`.
pub fn harmonic_representative(a0: C64, a1: C64) -> Form01 {
    Form01::new(
        -3,
        move |z| (a0 + a1 * z.conj()) * (2.0 / (1.0 + z.norm_sqr()).powi(3)),
        move |w| (-a0 * w.conj() - a1) * (2.0 / (1.0 + w.norm_sqr()).powi(3)),
    )
}

/// `exp(-1 / (1 - s))` for `s < 1`, zero otherwise.
pub fn bump(s: f64) -> f64 {
    if s < 1.0 {
        (-1.0 / (1.0 - s)).exp()
    } else {
        0.0
    }
}

/// `d/ds` of [`bump`].
pub fn bump_derivative(s: f64) -> f64 {
    if s < 1.0 {
        -bump(s) / ((1.0 - s) * (1.0 - s))
    } else {
        0.0
    }
}

/// `f(z) = (c0 + c1 z_bar) B(|z - centre|^2 / radius^2)`, a smooth function
/// with compact support, and its `d/dz_bar`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpFixture {
    pub centre: C64,
    pub radius: f64,
    pub c0: C64,
    pub c1: C64,
}

impl BumpFixture {
    pub fn value(&self, z: C64) -> C64 {
        let s = (z - self.centre).norm_sqr() / (self.radius * self.radius);
        (self.c0 + self.c1 * z.conj()) * bump(s)
    }

    pub fn dzbar(&self, z: C64) -> C64 {
        let d = z - self.centre;
        let r2 = self.radius * self.radius;
        let s = d.norm_sqr() / r2;
        self.c1 * bump(s) + (self.c0 + self.c1 * z.conj()) * bump_derivative(s) * d / r2
    }

    pub fn section(&self, k: i32) -> BundleSection {
        let me = *self;
        BundleSection::compactly_supported(k, move |z| me.value(z))
    }

    /// `d_bar` of the section, an exact `(0,1)`-form.
    pub fn exact_form(&self, k: i32) -> Form01 {
        let me = *self;
        Form01::from_chart0(k, move |z| me.dzbar(z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd::{derivative, Scheme};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn harmonic_representative_clutches_and_decays() {
        let w = harmonic_representative(c(1.0, -2.0), c(0.5, 0.25));
        assert!(validate_form(&w, &annulus_sample()).passes(1e-12));
        for (l, m) in [(0, 0), (1, 0), (0, 1), (2, 2), (4, 0)] {
            assert!(decay_check(DecayTarget::Form(&w), l, m).unwrap().passed, "{l} {m}");
        }
        assert!(decay_check(DecayTarget::Form(&w), 5, 0).is_err());
    }

    #[test]
    fn sections_and_decay_examples() {
        let constant = BundleSection::new(0, |_| c(2.0, 1.0), |_| c(2.0, 1.0));
        assert!(validate_section(&constant, &annulus_sample()).passes(1e-14));
        assert!(decay_check(DecayTarget::Section(&constant), 0, 0).unwrap().passed);
        assert!(decay_check(DecayTarget::Section(&constant), -1, 0).unwrap().passed);
        let bad = BundleSection::new(0, |z| z, |w| w);
        assert!(!validate_section(&bad, &annulus_sample()).passes(1e-3));
        let grows = BundleSection::new(0, |z| z * z, |w| w.inv() * w.inv());
        assert!(!decay_check(DecayTarget::Section(&grows), 0, 0).unwrap().passed);
        assert!(decay_check(DecayTarget::Section(&grows), 1, 0).is_err());
    }

    #[test]
    fn dimensions() {
        assert_eq!(h1_dimension(-3), 2);
        assert_eq!(h1_dimension(-2), 1);
        assert_eq!(h1_dimension(-1), 0);
        assert_eq!(h1_dimension(4), 0);
        let w = harmonic_representative(c(1.0, 0.0), c(0.0, 0.0));
        let triv = Form01 { k: -1, ..w };
        assert_eq!(
            cohomology_coefficients(&triv, &QuadratureConfig::default()),
            Err(Error::TrivialCohomology { k: -1 })
        );
    }

    #[test]
    fn bump_derivative_matches_differences() {
        let b = BumpFixture {
            centre: c(0.3, -0.2),
            radius: 1.5,
            c0: c(1.0, 2.0),
            c1: c(-0.5, 0.7),
        };
        for z in [c(0.1, 0.2), c(1.0, -0.5), c(-0.4, 0.9)] {
            let dx = derivative(|t| Ok(b.value(z + t)), 1e-4, Scheme::Richardson).unwrap();
            let dy = derivative(|t| Ok(b.value(z + c(0.0, t))), 1e-4, Scheme::Richardson).unwrap();
            let dzbar = (dx + c(0.0, 1.0) * dy) * 0.5;
            assert!((dzbar - b.dzbar(z)).norm() < 1e-9);
        }
        assert_eq!(b.value(c(5.0, 0.0)), c(0.0, 0.0));
        assert!(validate_form(&b.exact_form(-3), &annulus_sample()).passes(1e-12));
        assert!(validate_section(&b.section(-3), &annulus_sample()).passes(1e-12));
    }
}
