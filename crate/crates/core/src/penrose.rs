//! Forms on twistor space with values in `L = L_{-3}`, the pushforwards
//! along the fibres `CP^1`, and the Penrose transform onto monogenic pairs
//! and their holomorphic extensions over the monogenic hull.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::cf::{cf_apply, cf_residual_complex, wirtinger_fd};
use crate::cp1::Form01;
use crate::domain::{Domain, DomainSpec};
use crate::error::{Error, Result};
use crate::fd::{derivative_vec, FdConfig, Scheme};
use crate::field::{BuiltinField, BuiltinKind, ComplexField, Pair, PairJet, QuaternionicField};
use crate::hull::{hull_contains, ImUnitSphereSampler};
use crate::quadrature::{quadrature_at_level, quadrature_c_vec, QuadratureConfig};
use crate::quat::{BiquaternionPoint, CMatrix, Quaternion, QuatVec, C64};
use crate::twistor::chart0_base;

const ZERO: C64 = C64::new(0.0, 0.0);

/// A `(0,1)`-form on the twistor space of `U` with values in `L_k`, written
/// in chart 0 against the frame `dz_bar, dX^1, ..., dX^{2n}`.
pub trait TwistorForm: Sync {
    fn n(&self) -> usize;

    fn degree(&self) -> i32 {
        -3
    }

    /// Coefficient of `dz_bar` at `(z, x)`.
    fn dzbar(&self, z: C64, x: &QuatVec) -> C64;

    /// Coefficient of `dw_bar` in chart 1.
    fn dwbar(&self, w: C64, x: &QuatVec) -> C64 {
        if w == ZERO {
            return ZERO;
        }
        let z = w.inv();
        -z.powi(-self.degree()) * z.conj() * z.conj() * self.dzbar(z, x)
    }

    /// Coefficients of `dX^1, ..., dX^{2n}`; `None` means all zero.
    fn k_part(&self, _z: C64, _x: &QuatVec) -> Option<Vec<C64>> {
        None
    }

    /// Chart-1 coefficients against `dX_1^i = z dX_0^i`.
    fn k_part_chart1(&self, w: C64, x: &QuatVec) -> Option<Vec<C64>> {
        let z = w.inv();
        let f = z.powi(-self.degree() - 1);
        self.k_part(z, x).map(|v| v.into_iter().map(|c| c * f).collect())
    }

    fn domain(&self) -> DomainSpec {
        DomainSpec::Whole { n: self.n() }
    }
}

/// `sharp(psi) = 2 (psi0 + psi1 z_bar) dz_bar / (1 + |z|^2)^3`.
pub struct SharpForm<'a, F: ?Sized> {
    pub psi: &'a F,
}

pub fn sharp<F: QuaternionicField + ?Sized>(psi: &F) -> SharpForm<'_, F> {
    SharpForm { psi }
}

impl<F: QuaternionicField + ?Sized> TwistorForm for SharpForm<'_, F> {
    fn n(&self) -> usize {
        self.psi.n()
    }

    fn dzbar(&self, z: C64, x: &QuatVec) -> C64 {
        let p = self.psi.pair(x);
        (p.0 + p.1 * z.conj()) * (2.0 / (1.0 + z.norm_sqr()).powi(3))
    }

    fn dwbar(&self, w: C64, x: &QuatVec) -> C64 {
        let p = self.psi.pair(x);
        (-p.0 * w.conj() - p.1) * (2.0 / (1.0 + w.norm_sqr()).powi(3))
    }

    fn domain(&self) -> DomainSpec {
        self.psi.domain()
    }
}

/// `sharp(psi)` plus the `K`-part that makes it `d_bar`-closed when `psi`
/// is monogenic. Both represent the same class at the level of `tau_*`, and
/// they agree on every real fibre; the closed one is what the complexified
/// transform needs.
pub struct ClosedSharpForm<'a, F: ?Sized> {
    pub psi: &'a F,
    /// Used when the field has no closed-form jet.
    pub jet_fd: FdConfig,
}

pub fn sharp_closed<F: QuaternionicField + ?Sized>(psi: &F, jet_fd: FdConfig) -> ClosedSharpForm<'_, F> {
    ClosedSharpForm { psi, jet_fd }
}

/// The `K`-part of the closed completion, from the first derivatives of `psi`.
pub fn closing_k_part(jet: &PairJet, z: C64) -> Vec<C64> {
    let zb = z.conj();
    let s2 = (1.0 + z.norm_sqr()).powi(2);
    jet.psi0
        .iter()
        .zip(&jet.psi1)
        .flat_map(|(w0, w1)| {
            let a = w0.d_beta;
            let b = (w0.d_alpha_bar + w1.d_beta) * 0.5;
            let c = w1.d_alpha_bar;
            let a2 = w0.d_alpha;
            let b2 = (w0.d_beta_bar - w1.d_alpha) * 0.5;
            let c2 = w1.d_beta_bar;
            [
                -(a + b * zb * 2.0 + c * zb * zb) / s2,
                (-a2 + b2 * zb * 2.0 + c2 * zb * zb) / s2,
            ]
        })
        .collect()
}

impl<F: QuaternionicField + ?Sized> TwistorForm for ClosedSharpForm<'_, F> {
    fn n(&self) -> usize {
        self.psi.n()
    }

    fn dzbar(&self, z: C64, x: &QuatVec) -> C64 {
        sharp(self.psi).dzbar(z, x)
    }

    fn dwbar(&self, w: C64, x: &QuatVec) -> C64 {
        sharp(self.psi).dwbar(w, x)
    }

    fn k_part(&self, z: C64, x: &QuatVec) -> Option<Vec<C64>> {
        let jet = match self.psi.jet(x) {
            Some(j) => Ok(j),
            None => wirtinger_fd(self.psi, x, &self.jet_fd),
        };
        Some(match jet {
            Ok(j) => closing_k_part(&j, z),
            Err(_) => vec![C64::new(f64::NAN, f64::NAN); 2 * self.psi.n()],
        })
    }

    fn domain(&self) -> DomainSpec {
        self.psi.domain()
    }
}

/// `d_bar (g f)` for a bump `f(z)` in the fibre times `g(x) = 1 + c alpha_1`:
/// an exact form.
pub struct ExactBumpForm {
    pub n: usize,
    pub bump: crate::cp1::BumpFixture,
    pub c: C64,
}

impl ExactBumpForm {
    fn weight(&self, x: &QuatVec) -> C64 {
        1.0 + self.c * x.0[0].to_pair().0
    }
}

impl TwistorForm for ExactBumpForm {
    fn n(&self) -> usize {
        self.n
    }

    fn dzbar(&self, z: C64, x: &QuatVec) -> C64 {
        self.bump.dzbar(z) * self.weight(x)
    }

    fn k_part(&self, z: C64, _x: &QuatVec) -> Option<Vec<C64>> {
        // X^{2l+1} = z d_alpha + d_beta_bar; only d_alpha_1 of the weight is nonzero.
        let mut out = vec![ZERO; 2 * self.n];
        out[1] = self.bump.value(z) * z * self.c;
        Some(out)
    }
}

/// The harmonic representative, constant along the base.
pub struct ConstantHarmonicForm {
    pub n: usize,
    pub a0: C64,
    pub a1: C64,
}

impl TwistorForm for ConstantHarmonicForm {
    fn n(&self) -> usize {
        self.n
    }

    fn dzbar(&self, z: C64, _x: &QuatVec) -> C64 {
        (self.a0 + self.a1 * z.conj()) * (2.0 / (1.0 + z.norm_sqr()).powi(3))
    }
}

/// Complex scalar multiple of a field, `(a psi0, a psi1)`.
pub struct ScaledField<'a, F: ?Sized> {
    pub a: C64,
    pub psi: &'a F,
}

impl<F: QuaternionicField + ?Sized> QuaternionicField for ScaledField<'_, F> {
    fn n(&self) -> usize {
        self.psi.n()
    }

    fn pair(&self, x: &QuatVec) -> Pair {
        self.psi.pair(x) * self.a
    }

    fn domain(&self) -> DomainSpec {
        self.psi.domain()
    }

    fn name(&self) -> String {
        format!("{} * {}", self.a, self.psi.name())
    }
}

/// A derivation from the frame `(d/dz_bar, X^1, ..., X^{2n})` with
/// `X^{2l+1} = z d/dbeta_l - d/dalpha_bar_l`, `X^{2l+2} = z d/dalpha_l + d/dbeta_bar_l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameOp {
    Zbar,
    /// Zero-based index `i` of `X^{i+1}`.
    X(usize),
}

/// Applies every frame field to a vector-valued `g(z, x)` at one point.
/// Returns `[d_zbar g, X^1 g, ..., X^{2n} g]`.
pub fn frame_derivatives<G>(g: G, z: C64, x: &QuatVec, domain: &dyn Domain, cfg: &FdConfig) -> Result<Vec<Vec<C64>>>
where
    G: Fn(C64, &QuatVec) -> Vec<C64>,
{
    let i = C64::new(0.0, 1.0);
    let hz = cfg.step_at(z.norm())?;
    let hx = cfg.step_at(x.norm())?;
    let dre = derivative_vec(|t| Ok(g(z + t, x)), hz, cfg.scheme)?;
    let dim = derivative_vec(|t| Ok(g(z + i * t, x)), hz, cfg.scheme)?;
    let zbar: Vec<C64> = dre.iter().zip(&dim).map(|(a, b)| (a + i * b) * 0.5).collect();
    let base = x.coords();
    let partial = |coord: usize| -> Result<Vec<C64>> {
        derivative_vec(
            |t| {
                let mut c = base.clone();
                c[coord] += t;
                let q = QuatVec::from_coords(&c)?;
                if !domain.contains(&q) {
                    return Err(Error::OutsideDomain { point: c });
                }
                Ok(g(z, &q))
            },
            hx,
            cfg.scheme,
        )
    };
    let mut out = vec![zbar];
    for l in 0..x.n() {
        let d: Vec<Vec<C64>> = (0..4).map(|mu| partial(4 * l + mu)).collect::<Result<_>>()?;
        let comb = |f: &dyn Fn(usize) -> C64| -> Vec<C64> { (0..d[0].len()).map(f).collect() };
        // alpha = x0 + i x1, beta = x3 + i x2
        let x_odd = comb(&|k| {
            let d_beta = (d[3][k] - i * d[2][k]) * 0.5;
            let d_alpha_bar = (d[0][k] + i * d[1][k]) * 0.5;
            z * d_beta - d_alpha_bar
        });
        let x_even = comb(&|k| {
            let d_alpha = (d[0][k] - i * d[1][k]) * 0.5;
            let d_beta_bar = (d[3][k] + i * d[2][k]) * 0.5;
            z * d_alpha + d_beta_bar
        });
        out.push(x_odd);
        out.push(x_even);
    }
    Ok(out)
}

/// The `(0,2)`-components of `d_bar omega` in chart 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Form02 {
    /// `C_{zbar, i} = d_zbar omega_i - X^i omega_zbar`.
    pub zbar: Vec<C64>,
    /// `C_{ij} = X^i omega_j - X^j omega_i` for `i < j`, row-major.
    pub pairs: Vec<C64>,
}

pub fn dbar_chart0<W: TwistorForm + ?Sized>(w: &W, z: C64, x: &QuatVec, cfg: &FdConfig) -> Result<Form02> {
    let n2 = 2 * w.n();
    let domain = w.domain();
    let v = |z: C64, x: &QuatVec| -> Vec<C64> {
        let mut out = vec![w.dzbar(z, x)];
        match w.k_part(z, x) {
            Some(k) => out.extend(k),
            None => out.extend(std::iter::repeat_n(ZERO, n2)),
        }
        out
    };
    let d = frame_derivatives(v, z, x, &domain, cfg)?;
    let zbar = (0..n2).map(|i| d[0][1 + i] - d[1 + i][0]).collect();
    let mut pairs = Vec::new();
    for i in 0..n2 {
        for j in i + 1..n2 {
            pairs.push(d[1 + i][1 + j] - d[1 + j][1 + i]);
        }
    }
    Ok(Form02 { zbar, pairs })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PenroseConfig {
    /// Differences along the base and the fibre inside `d_bar`.
    pub fd: FdConfig,
    /// Differences for jets of fields without a closed form.
    pub jet_fd: FdConfig,
    /// Quadrature of `(0,1)` moments.
    pub quad: QuadratureConfig,
    /// Quadrature of `(0,2)` moments, whose integrands carry difference noise.
    pub quad02: QuadratureConfig,
    /// Closedness certificate threshold, relative to `max(1, |psi|)`.
    pub closed_tol: f64,
}

impl Default for PenroseConfig {
    fn default() -> Self {
        Self {
            fd: FdConfig {
                step: None,
                scheme: Scheme::Richardson,
            },
            jet_fd: FdConfig::richardson(1e-3),
            quad: QuadratureConfig {
                tol: 1e-11,
                ..Default::default()
            },
            quad02: QuadratureConfig {
                tol: 1e-8,
                ..Default::default()
            },
            closed_tol: 1e-5,
        }
    }
}

fn moments<H: Fn(C64) -> C64 + Sync>(h: H, k: i32, quad: &QuadratureConfig, level: Option<usize>) -> Result<(Vec<C64>, usize)> {
    let dim = crate::cp1::h1_dimension(k);
    if dim == 0 {
        return Err(Error::TrivialCohomology { k });
    }
    let g = move |z: C64| {
        let v = h(z);
        let mut acc = Vec::with_capacity(dim);
        let mut p = v;
        for _ in 0..dim {
            acc.push(p);
            p *= z;
        }
        acc
    };
    match level {
        Some(l) => Ok((quadrature_at_level(g, dim, quad, l)?, l)),
        None => {
            let r = quadrature_c_vec(g, dim, quad)?;
            Ok((r.values, r.level))
        }
    }
}

fn to_pair(v: &[C64]) -> Pair {
    Pair(v[0], v.get(1).copied().unwrap_or(ZERO))
}

/// `psi_A(x) = (1/pi) int z^A omega_zbar(z, x) dA`, `A = 0, 1`.
pub fn tau_push_01<W: TwistorForm + ?Sized>(w: &W, x: &QuatVec, quad: &QuadratureConfig) -> Result<Pair> {
    Ok(to_pair(&moments(|z| w.dzbar(z, x), w.degree(), quad, None)?.0))
}

/// Component `i` is `(1/pi) int C_{zbar, i}(z, x) dA`.
pub fn tau_push_02<W: TwistorForm + ?Sized>(w: &W, x: &QuatVec, cfg: &PenroseConfig) -> Result<Vec<C64>> {
    let n2 = 2 * w.n();
    // Any stencil exit shows up at the fibre origin.
    dbar_chart0(w, ZERO, x, &cfg.fd)?;
    let out = quadrature_c_vec(
        |z| match dbar_chart0(w, z, x, &cfg.fd) {
            Ok(c) => c.zbar,
            Err(_) => vec![C64::new(f64::NAN, f64::NAN); n2],
        },
        n2,
        &cfg.quad02,
    )?;
    Ok(out.values)
}

/// Linear relation between `tau_push_02(d_bar sharp(psi))` and the
/// residuals `(r1, r2)` of `cf_residual_complex`, fitted once.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub kappa: C64,
    /// Whether `r1` and `r2` trade places within each block.
    pub swap: bool,
    pub signs: [f64; 2],
    pub fit_residual: f64,
    pub points: usize,
}

impl Calibration {
    /// The pushforward predicted from `cf_residual_complex`.
    pub fn apply(&self, r: &[C64]) -> Vec<C64> {
        r.chunks_exact(2)
            .flat_map(|c| {
                let (a, b) = if self.swap { (c[1], c[0]) } else { (c[0], c[1]) };
                [a * self.kappa * self.signs[0], b * self.kappa * self.signs[1]]
            })
            .collect()
    }
}

/// Fits the calibration on `conj(alpha_1)^2` at five fixed points.
pub fn calibrate(cfg: &PenroseConfig) -> Result<Calibration> {
    let psi = BuiltinField::new(BuiltinKind::NonmonogenicQuadratic, 1)?;
    let points = [
        [0.7, -0.2, 0.4, 0.1],
        [-0.3, 0.9, 0.2, -0.5],
        [1.1, 0.4, -0.6, 0.3],
        [0.2, -0.8, -0.3, 0.6],
        [-0.9, -0.1, 0.5, -0.4],
    ];
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for p in points {
        let x = QuatVec(vec![Quaternion::from(p)]);
        lhs.extend(tau_push_02(&sharp(&psi), &x, cfg)?);
        rhs.extend(cf_residual_complex(&psi, &x, &cfg.fd)?);
    }
    let mut best: Option<Calibration> = None;
    for swap in [false, true] {
        for signs in [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]] {
            let unit = Calibration {
                kappa: C64::new(1.0, 0.0),
                swap,
                signs,
                fit_residual: 0.0,
                points: points.len(),
            };
            let pred = unit.apply(&rhs);
            let den: f64 = pred.iter().map(|v| v.norm_sqr()).sum();
            if den == 0.0 {
                continue;
            }
            let kappa: C64 = pred.iter().zip(&lhs).map(|(p, l)| p.conj() * l).sum::<C64>() / den;
            let fit_residual = pred
                .iter()
                .zip(&lhs)
                .map(|(p, l)| (p * kappa - l).norm())
                .fold(0.0, f64::max);
            if best.is_none_or(|b| fit_residual < b.fit_residual - 1e-12) {
                best = Some(Calibration {
                    kappa,
                    fit_residual,
                    ..unit
                });
            }
        }
    }
    best.ok_or_else(|| Error::Config("calibration fixture has vanishing residuals".into()))
}

/// `sharp(psi)` restricted to the fibre over `x`, with both chart
/// coefficients taken from the form itself.
pub fn sharp_fibre<F: QuaternionicField + Clone + Send + 'static>(psi: &F, x: &QuatVec) -> Form01 {
    let (p0, x0) = (psi.clone(), x.clone());
    let (p1, x1) = (psi.clone(), x.clone());
    Form01::new(-3, move |z| sharp(&p0).dzbar(z, &x0), move |w| sharp(&p1).dwbar(w, &x1))
}

/// The calibration under the default configuration, computed on first use.
pub fn calibration() -> Result<Calibration> {
    static CAL: OnceLock<Result<Calibration>> = OnceLock::new();
    CAL.get_or_init(|| calibrate(&PenroseConfig::default())).clone()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PenroseValue {
    pub psi: Pair,
    /// `max_i |tau_push_02(d_bar omega)_i|` at the base point.
    pub closedness: f64,
}

/// The Penrose transform at `x`, after certifying closedness there.
pub fn penrose_transform<W: TwistorForm + ?Sized>(w: &W, x: &QuatVec, cfg: &PenroseConfig) -> Result<PenroseValue> {
    if w.n() != x.n() {
        return Err(Error::DimensionMismatch {
            expected: w.n(),
            got: x.n(),
        });
    }
    let closedness = tau_push_02(w, x, cfg)?.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let psi = penrose_transform_complex_unchecked(w, &BiquaternionPoint::real(x.clone()), &cfg.quad, None)?.0;
    let tol = cfg.closed_tol * psi.norm().max(1.0);
    if closedness.is_nan() || closedness > tol {
        return Err(Error::NotClosed { residual: closedness, tol });
    }
    Ok(PenroseValue { psi, closedness })
}

/// `omega` pulled back to the line `L_Sigma` at `[1 : z]`, as the
/// coefficient of `dz_bar`.
pub fn line_pullback<W: TwistorForm + ?Sized>(w: &W, sigma: &CMatrix, z: C64) -> C64 {
    let u: Vec<C64> = sigma.rows.iter().map(|r| r[0] + z * r[1]).collect();
    let base = chart0_base(z, &u);
    let mut h = w.dzbar(z, &base);
    if let Some(k) = w.k_part(z, &base) {
        let s = 1.0 / (1.0 + z.norm_sqr());
        for (l, q) in base.0.iter().enumerate() {
            let (a, b) = q.to_pair();
            let c_odd = -(sigma.rows[2 * l][1].conj() + b) * s;
            let c_even = (sigma.rows[2 * l + 1][1].conj() - a) * s;
            h += c_odd * k[2 * l] + c_even * k[2 * l + 1];
        }
    }
    h
}

fn penrose_transform_complex_unchecked<W: TwistorForm + ?Sized>(
    w: &W,
    sigma: &BiquaternionPoint,
    quad: &QuadratureConfig,
    level: Option<usize>,
) -> Result<(Pair, usize)> {
    let (v, level) = if sigma.is_real() {
        moments(|z| w.dzbar(z, &sigma.x), w.degree(), quad, level)?
    } else {
        let m = sigma.to_matrix();
        moments(|z| line_pullback(w, &m, z), w.degree(), quad, level)?
    };
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::QuadratureDiverged {
            change: f64::NAN,
            tol: quad.tol,
        });
    }
    Ok((to_pair(&v), level))
}

/// The holomorphic extension of the transform, evaluated at a point of the
/// monogenic hull of the form's domain.
pub fn penrose_transform_complex<W: TwistorForm + ?Sized>(
    w: &W,
    sigma: &BiquaternionPoint,
    sampler: &ImUnitSphereSampler,
    cfg: &PenroseConfig,
) -> Result<Pair> {
    let domain = w.domain();
    let q = hull_contains(sigma, &domain, sampler)?;
    if !q.verdict {
        return Err(Error::NotInHull { inf: q.inf_value });
    }
    Ok(penrose_transform_complex_unchecked(w, sigma, &cfg.quad, None)?.0)
}

/// The transform as a field on `H^n`, evaluated on one fixed quadrature grid
/// so that finite differences of it are smooth.
pub struct TransformField<'a, W: ?Sized> {
    pub form: &'a W,
    pub quad: QuadratureConfig,
    pub level: usize,
}

impl<W: TwistorForm + ?Sized> QuaternionicField for TransformField<'_, W> {
    fn n(&self) -> usize {
        self.form.n()
    }

    fn pair(&self, x: &QuatVec) -> Pair {
        penrose_transform_complex_unchecked(self.form, &BiquaternionPoint::real(x.clone()), &self.quad, Some(self.level))
            .map(|r| r.0)
            .unwrap_or(Pair(C64::new(f64::NAN, 0.0), C64::new(f64::NAN, 0.0)))
    }

    fn domain(&self) -> DomainSpec {
        self.form.domain()
    }

    fn name(&self) -> String {
        "penrose_transform".into()
    }
}

/// The complexified transform as a function of `Z in M_{2n x 2}(C)`, on one
/// fixed quadrature grid.
pub struct ComplexTransformField<'a, W: ?Sized> {
    pub form: &'a W,
    pub quad: QuadratureConfig,
    pub level: usize,
}

impl<'a, W: TwistorForm + ?Sized> ComplexTransformField<'a, W> {
    /// Chooses the grid level by adaptive quadrature at `sigma`.
    pub fn at(form: &'a W, sigma: &BiquaternionPoint, quad: &QuadratureConfig) -> Result<Self> {
        let level = penrose_transform_complex_unchecked(form, sigma, quad, None)?.1;
        Ok(Self {
            form,
            quad: *quad,
            level,
        })
    }
}

impl<W: TwistorForm + ?Sized> ComplexField for ComplexTransformField<'_, W> {
    fn n(&self) -> usize {
        self.form.n()
    }

    fn eval(&self, z: &CMatrix) -> Pair {
        let v = quadrature_at_level(
            |t| {
                let h = line_pullback(self.form, z, t);
                vec![h, h * t]
            },
            2,
            &self.quad,
            self.level,
        );
        match v {
            Ok(v) => Pair(v[0], v[1]),
            Err(_) => Pair(C64::new(f64::NAN, 0.0), C64::new(f64::NAN, 0.0)),
        }
    }

    fn name(&self) -> String {
        "penrose_transform_complex".into()
    }
}

/// `|D P(omega)|` at `x`, differentiating the transform on a fixed grid.
pub fn transform_cf_residual<W: TwistorForm + ?Sized>(w: &W, x: &QuatVec, cfg: &PenroseConfig) -> Result<f64> {
    let level = penrose_transform_complex_unchecked(w, &BiquaternionPoint::real(x.clone()), &cfg.quad, None)?.1;
    let f = TransformField {
        form: w,
        quad: cfg.quad,
        level,
    };
    Ok(cf_apply(&f, x, &cfg.fd)?.norm())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramPoint {
    pub x: QuatVec,
    pub pushforward: Vec<C64>,
    pub predicted: Vec<C64>,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramReport {
    pub field: String,
    pub calibration: Calibration,
    pub max_residual: f64,
    /// Largest component of either side.
    pub max_magnitude: f64,
    pub per_point: Vec<DiagramPoint>,
}

/// Compares `tau_push_02(d_bar sharp(psi))` with the calibrated image of
/// `D psi` over the sample.
pub fn diagram_check<F: QuaternionicField + ?Sized>(
    psi: &F,
    samples: &[QuatVec],
    calibration: &Calibration,
    cfg: &PenroseConfig,
) -> Result<DiagramReport> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let form = sharp(psi);
    let mut per_point = Vec::with_capacity(samples.len());
    let mut max_residual: f64 = 0.0;
    let mut max_magnitude: f64 = 0.0;
    for x in samples {
        let pushforward = tau_push_02(&form, x, cfg)?;
        let predicted = calibration.apply(&cf_residual_complex(psi, x, &cfg.fd)?);
        let residual = pushforward
            .iter()
            .zip(&predicted)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        max_residual = max_residual.max(residual);
        max_magnitude = pushforward
            .iter()
            .chain(&predicted)
            .map(|c| c.norm())
            .fold(max_magnitude, f64::max);
        per_point.push(DiagramPoint {
            x: x.clone(),
            pushforward,
            predicted,
            residual,
        });
    }
    Ok(DiagramReport {
        field: psi.name(),
        calibration: *calibration,
        max_residual,
        max_magnitude,
        per_point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::BuiltinComplexField;
    use crate::sampling::{random_complex, random_quat_vec, sample_shell, seeded};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn sharp_of_constants() {
        let psi = BuiltinField::new(BuiltinKind::Constant { c0: c(1.0, 0.0), c1: ZERO }, 1).unwrap();
        let x = random_quat_vec(1, 1.0, &mut seeded(1));
        assert_eq!(sharp(&psi).dzbar(ZERO, &x), c(2.0, 0.0));
    }

    #[test]
    fn sharp_clutches_fibrewise() {
        let psi = BuiltinField::by_name("nonmonogenic_mixed", 2).unwrap();
        let form = sharp(&psi);
        let mut rng = seeded(2);
        for _ in 0..100 {
            let x = random_quat_vec(2, 1.0, &mut rng);
            let z = random_complex(3.0, &mut rng);
            let lhs = form.dwbar(z.inv(), &x);
            let rhs = -z.powi(3) * z.conj() * z.conj() * form.dzbar(z, &x);
            assert!((lhs - rhs).norm() <= 1e-14 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn sharp_fibres_are_valid_forms() {
        use crate::cp1::{annulus_sample, decay_check, validate_form, DecayTarget};
        let psi = BuiltinField::by_name("linear_monogenic", 1).unwrap();
        let x = random_quat_vec(1, 1.0, &mut seeded(9));
        let w = sharp_fibre(&psi, &x);
        assert!(validate_form(&w, &annulus_sample()).passes(1e-12));
        for l in 0..=4 {
            assert!(decay_check(DecayTarget::Form(&w), l, 4 - l).unwrap().passed);
        }
    }

    #[test]
    fn closed_completion_is_pointwise_closed_for_monogenic() {
        let e = BuiltinField::by_name("E", 1).unwrap();
        let form = sharp_closed(&e, FdConfig::richardson(1e-3));
        let cfg = FdConfig {
            step: Some(1e-4),
            scheme: Scheme::Richardson,
        };
        let mut rng = seeded(3);
        for x in sample_shell(1, 0.6, 1.5, 5, &mut rng) {
            let z = random_complex(1.0, &mut rng);
            let d = dbar_chart0(&form, z, &x, &cfg).unwrap();
            let worst = d.zbar.iter().chain(&d.pairs).map(|v| v.norm()).fold(0.0, f64::max);
            assert!(worst < 1e-7, "{worst}");
        }
    }

    #[test]
    fn frame_commutes() {
        let g = |z: C64, x: &QuatVec| -> Vec<C64> {
            let (a, b) = x.0[0].to_pair();
            let (a2, b2) = x.0[1].to_pair();
            vec![(z * a.conj() + b * b2.conj() * z.conj()).exp() * (1.0 + a2 * a)]
        };
        let domain = DomainSpec::Whole { n: 2 };
        let cfg = FdConfig::richardson(1e-3);
        let mut rng = seeded(4);
        for _ in 0..5 {
            let x = random_quat_vec(2, 0.6, &mut rng);
            let z = random_complex(0.7, &mut rng);
            // second derivatives: apply the frame to each first derivative
            let first = |z: C64, x: &QuatVec| -> Vec<C64> {
                frame_derivatives(g, z, x, &domain, &cfg)
                    .unwrap()
                    .into_iter()
                    .map(|v| v[0])
                    .collect()
            };
            let second = frame_derivatives(first, z, &x, &domain, &cfg).unwrap();
            // second[a][b] = F_a F_b g
            #[allow(clippy::needless_range_loop)]
            for a in 0..5 {
                for b in 0..5 {
                    let comm = second[a][b] - second[b][a];
                    assert!(comm.norm() < 1e-6, "[{a},{b}] = {comm}");
                }
            }
        }
    }

    #[test]
    fn k_part_transition() {
        let e = BuiltinField::by_name("E", 1).unwrap();
        let form = sharp_closed(&e, FdConfig::default());
        let x = random_quat_vec(1, 1.0, &mut seeded(5));
        let z = c(0.4, -1.3);
        let k0 = form.k_part(z, &x).unwrap();
        let k1 = form.k_part_chart1(z.inv(), &x).unwrap();
        // omega_1 dX_1 = omega_0 dX_0 after the change of trivialisation.
        for (a, b) in k0.iter().zip(&k1) {
            assert!((b - a * z * z).norm() < 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn complex_transform_matches_extension_at_one_point() {
        let e = BuiltinField::by_name("E", 1).unwrap();
        let ext = BuiltinComplexField::by_name("E_ext", 1).unwrap();
        let form = sharp_closed(&e, FdConfig::default());
        let sigma = BiquaternionPoint {
            x: QuatVec(vec![Quaternion::new(1.0, 0.2, -0.3, 0.1)]),
            y: QuatVec(vec![Quaternion::new(0.1, -0.2, 0.15, 0.05)]),
        };
        let got = penrose_transform_complex(&form, &sigma, &ImUnitSphereSampler::default(), &PenroseConfig::default())
            .unwrap();
        let want = ext.eval(&sigma.to_matrix());
        assert!(got.max_abs_diff(want) < 1e-8, "{got:?} vs {want:?}");
    }
}
