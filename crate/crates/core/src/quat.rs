//! Quaternions, quaternion vectors and their complex pictures.
//!
//! `H^n` is a right `H`-module. The complex structure is right multiplication
//! by `i`, and a quaternion `q = x0 + i x1 + j x2 + k x3` corresponds to the
//! complex pair `(alpha, beta)` with `q = alpha + k beta`, i.e.
//! `alpha = x0 + i x1`, `beta = x3 + i x2`. Vectors in `C^{2n}` are stored
//! interleaved as `(alpha_1, beta_1, ..., alpha_n, beta_n)`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default absolute tolerance for floating point comparisons.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.coords()
    }
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);
    /// The basis `1, i, j, k` in coordinate order.
    pub const UNITS: [Self; 4] = [Self::ONE, Self::I, Self::J, Self::K];

    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self { x0, x1, x2, x3 }
    }

    /// `alpha + k beta`.
    pub fn from_pair(alpha: C64, beta: C64) -> Self {
        Self::new(alpha.re, alpha.im, beta.im, beta.re)
    }

    /// Inverse of [`Quaternion::from_pair`].
    pub fn to_pair(self) -> (C64, C64) {
        (C64::new(self.x0, self.x1), C64::new(self.x3, self.x2))
    }

    /// Embeds `C = span{1, i}` into `H`.
    pub fn from_complex(c: C64) -> Self {
        Self::new(c.re, c.im, 0.0, 0.0)
    }

    pub fn imaginary(u: [f64; 3]) -> Self {
        Self::new(0.0, u[0], u[1], u[2])
    }

    pub fn coords(self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    pub fn re(self) -> f64 {
        self.x0
    }

    pub fn conj(self) -> Self {
        Self::new(self.x0, -self.x1, -self.x2, -self.x3)
    }

    pub fn norm_sqr(self) -> f64 {
        self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn inverse(self) -> Self {
        self.conj() * (1.0 / self.norm_sqr())
    }

    /// `Re(conj(self) other)`, the real inner product.
    pub fn inner(self, other: Self) -> f64 {
        self.x0 * other.x0 + self.x1 * other.x1 + self.x2 * other.x2 + self.x3 * other.x3
    }

    /// Right multiplication by a complex scalar.
    pub fn scale_c(self, c: C64) -> Self {
        self * Self::from_complex(c)
    }

    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        (self - other).norm() <= tol
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x0 + o.x0, self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x0 - o.x0, self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x0, -self.x1, -self.x2, -self.x3)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let a = self;
        Self::new(
            a.x0 * b.x0 - a.x1 * b.x1 - a.x2 * b.x2 - a.x3 * b.x3,
            a.x0 * b.x1 + a.x1 * b.x0 + a.x2 * b.x3 - a.x3 * b.x2,
            a.x0 * b.x2 - a.x1 * b.x3 + a.x2 * b.x0 + a.x3 * b.x1,
            a.x0 * b.x3 + a.x1 * b.x2 - a.x2 * b.x1 + a.x3 * b.x0,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x0 * s, self.x1 * s, self.x2 * s, self.x3 * s)
    }
}

/// A point of `H^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct QuatVec(pub Vec<Quaternion>);

impl TryFrom<Vec<f64>> for QuatVec {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        QuatVec::from_coords(&v)
    }
}

impl From<QuatVec> for Vec<f64> {
    fn from(v: QuatVec) -> Self {
        v.coords()
    }
}

impl QuatVec {
    pub fn zeros(n: usize) -> Self {
        Self(vec![Quaternion::ZERO; n])
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// Flat real coordinates `(x0^1, x1^1, x2^1, x3^1, x0^2, ...)`.
    pub fn coords(&self) -> Vec<f64> {
        self.0.iter().flat_map(|q| q.coords()).collect()
    }

    pub fn from_coords(c: &[f64]) -> Result<Self> {
        if c.is_empty() || !c.len().is_multiple_of(4) {
            return Err(Error::Config(format!(
                "quaternion vector needs a positive multiple of 4 reals, got {}",
                c.len()
            )));
        }
        Ok(Self(
            c.chunks_exact(4)
                .map(|q| Quaternion::new(q[0], q[1], q[2], q[3]))
                .collect(),
        ))
    }

    /// `Re(sum_l conj(x_l) y_l)`.
    pub fn inner(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.inner(*b)).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|q| q.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Right multiplication by a quaternion scalar, `(x q)_l = x_l q`.
    pub fn right_mul(&self, q: Quaternion) -> Self {
        Self(self.0.iter().map(|x| *x * q).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.iter().map(|x| *x * s).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|q| *q == Quaternion::ZERO)
    }

    /// Interleaved complex picture `(alpha_1, beta_1, ...)`.
    pub fn to_complex(&self) -> Vec<C64> {
        self.0
            .iter()
            .flat_map(|q| {
                let (a, b) = q.to_pair();
                [a, b]
            })
            .collect()
    }

    pub fn from_complex(v: &[C64]) -> Result<Self> {
        if v.is_empty() || !v.len().is_multiple_of(2) {
            return Err(Error::Config(format!(
                "complex vector needs a positive even length, got {}",
                v.len()
            )));
        }
        Ok(Self(
            v.chunks_exact(2)
                .map(|p| Quaternion::from_pair(p[0], p[1]))
                .collect(),
        ))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.n() == other.n() && (self - other).norm() <= tol
    }
}

impl Add for &QuatVec {
    type Output = QuatVec;
    fn add(self, o: &QuatVec) -> QuatVec {
        QuatVec(self.0.iter().zip(&o.0).map(|(a, b)| *a + *b).collect())
    }
}

impl Sub for &QuatVec {
    type Output = QuatVec;
    fn sub(self, o: &QuatVec) -> QuatVec {
        QuatVec(self.0.iter().zip(&o.0).map(|(a, b)| *a - *b).collect())
    }
}

/// The map induced by `w -> w k` on the complex picture:
/// `(alpha, beta) -> (-conj(beta), conj(alpha))` pairwise.
pub fn kappa(v: &[C64]) -> Vec<C64> {
    v.chunks_exact(2)
        .flat_map(|p| [-p[1].conj(), p[0].conj()])
        .collect()
}

/// A complex `2n x 2` matrix stored row-wise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CMatrix {
    pub rows: Vec<[C64; 2]>,
}

impl CMatrix {
    pub fn from_columns(c0: &[C64], c1: &[C64]) -> Self {
        Self {
            rows: c0.iter().zip(c1).map(|(a, b)| [*a, *b]).collect(),
        }
    }

    pub fn zeros(rows: usize) -> Self {
        Self {
            rows: vec![[C64::new(0.0, 0.0); 2]; rows],
        }
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        self.rows.iter().map(|r| r[c]).collect()
    }

    pub fn n(&self) -> usize {
        self.rows.len() / 2
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.rows[row][col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: C64) {
        self.rows[row][col] = v;
    }

    /// Determinant of a `2 x 2` matrix.
    pub fn det2(&self) -> C64 {
        debug_assert_eq!(self.rows.len(), 2);
        self.rows[0][0] * self.rows[1][1] - self.rows[0][1] * self.rows[1][0]
    }

    /// Product of two `2 x 2` matrices.
    pub fn mul2(&self, o: &CMatrix) -> CMatrix {
        let a = &self.rows;
        let b = &o.rows;
        CMatrix {
            rows: vec![
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
    }

    pub fn max_abs_diff(&self, o: &CMatrix) -> f64 {
        self.rows
            .iter()
            .zip(&o.rows)
            .flat_map(|(a, b)| [(a[0] - b[0]).norm(), (a[1] - b[1]).norm()])
            .fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r[0].norm_sqr() + r[1].norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// `M(x) = (x | K(x))`.
pub fn embed_m(x: &QuatVec) -> CMatrix {
    let c = x.to_complex();
    CMatrix::from_columns(&c, &kappa(&c))
}

/// Splits a `2 x 2` complex matrix as `M(x) + i M(y)`.
pub fn decompose_matrix(z: &CMatrix) -> (Quaternion, Quaternion) {
    let half = 0.5;
    let i = C64::new(0.0, 1.0);
    let (z00, z01, z10, z11) = (z.get(0, 0), z.get(0, 1), z.get(1, 0), z.get(1, 1));
    let alpha = (z00 + z11.conj()) * half;
    let gamma = (z00 - z11.conj()) * half / i;
    let beta = (z10 - z01.conj()) * half;
    let delta = (z10 + z01.conj()) * half / i;
    (
        Quaternion::from_pair(alpha, beta),
        Quaternion::from_pair(gamma, delta),
    )
}

/// A point `(x, y)` of `M_{2n x 2}(C) = H^n (x) C`, i.e. the matrix `M(x) + i M(y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiquaternionPoint {
    pub x: QuatVec,
    pub y: QuatVec,
}

impl BiquaternionPoint {
    pub fn new(x: QuatVec, y: QuatVec) -> Result<Self> {
        if x.n() != y.n() {
            return Err(Error::DimensionMismatch {
                expected: x.n(),
                got: y.n(),
            });
        }
        Ok(Self { x, y })
    }

    /// The real point `(x, 0)`.
    pub fn real(x: QuatVec) -> Self {
        let n = x.n();
        Self {
            x,
            y: QuatVec::zeros(n),
        }
    }

    pub fn n(&self) -> usize {
        self.x.n()
    }

    pub fn is_real(&self) -> bool {
        self.y.is_zero()
    }

    /// Columns `(x + i y | K(x) + i K(y))`.
    pub fn to_matrix(&self) -> CMatrix {
        let i = C64::new(0.0, 1.0);
        let xc = self.x.to_complex();
        let yc = self.y.to_complex();
        let kx = kappa(&xc);
        let ky = kappa(&yc);
        let c0: Vec<C64> = xc.iter().zip(&yc).map(|(a, b)| a + i * b).collect();
        let c1: Vec<C64> = kx.iter().zip(&ky).map(|(a, b)| a + i * b).collect();
        CMatrix::from_columns(&c0, &c1)
    }

    pub fn from_matrix(z: &CMatrix) -> Result<Self> {
        if z.rows.is_empty() || !z.rows.len().is_multiple_of(2) {
            return Err(Error::Config(format!(
                "matrix needs a positive even number of rows, got {}",
                z.rows.len()
            )));
        }
        let (xs, ys): (Vec<_>, Vec<_>) = z
            .rows
            .chunks_exact(2)
            .map(|blk| {
                decompose_matrix(&CMatrix {
                    rows: vec![blk[0], blk[1]],
                })
            })
            .unzip();
        Ok(Self {
            x: QuatVec(xs),
            y: QuatVec(ys),
        })
    }

    /// `sqrt(|x|^2 + |y|^2)`.
    pub fn norm_c(&self) -> f64 {
        (self.x.norm_sqr() + self.y.norm_sqr()).sqrt()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        ((&self.x - &other.x).norm_sqr() + (&self.y - &other.y).norm_sqr()).sqrt()
    }

    /// `x + y q` for a quaternion `q`.
    pub fn slice_point(&self, q: Quaternion) -> QuatVec {
        &self.x + &self.y.right_mul(q)
    }
}

/// Determinant of the `2 x 2` matrix form of an `n = 1` point.
pub fn det_biquat(p: &BiquaternionPoint) -> Result<C64> {
    if p.n() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: p.n(),
        });
    }
    Ok(p.to_matrix().det2())
}
