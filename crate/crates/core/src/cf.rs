//! The n-Cauchy-Fueter operator, its complex-coordinate form and the
//! holomorphic operator `D^C` on `M_{2n x 2}(C)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::fd::{derivative, FdConfig};
use crate::field::{ComplexField, Pair, PairJet, QuaternionicField, Wirtinger};
use crate::quat::{CMatrix, Quaternion, QuatVec, C64};

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// Real partial `d psi / d x_{4 l + mu}` as a complex pair.
fn partial<F: QuaternionicField + ?Sized>(
    psi: &F,
    p: &QuatVec,
    coord: usize,
    cfg: &FdConfig,
) -> Result<Pair> {
    let domain = psi.domain();
    let h = cfg.step_at(p.norm())?;
    let base = p.coords();
    derivative(
        |t| {
            let mut c = base.clone();
            c[coord] += t;
            let q = QuatVec::from_coords(&c)?;
            if !domain.contains(&q) {
                return Err(Error::OutsideDomain { point: c });
            }
            Ok(psi.pair(&q))
        },
        h,
        cfg.scheme,
    )
}

/// `d/dq_bar_l psi = sum_mu e_mu d psi / d x_{4 l + mu}` at `p`.
pub fn dbar_q<F: QuaternionicField + ?Sized>(
    psi: &F,
    l: usize,
    p: &QuatVec,
    cfg: &FdConfig,
) -> Result<Quaternion> {
    check_dim(psi.n(), p.n())?;
    if l >= p.n() {
        return Err(Error::Config(format!("block index {l} out of range for n = {}", p.n())));
    }
    let mut acc = Quaternion::ZERO;
    for (mu, unit) in Quaternion::UNITS.iter().enumerate() {
        acc += *unit * partial(psi, p, 4 * l + mu, cfg)?.to_quaternion();
    }
    Ok(acc)
}

/// `D psi (p)`, one quaternion per block.
pub fn cf_apply<F: QuaternionicField + ?Sized>(psi: &F, p: &QuatVec, cfg: &FdConfig) -> Result<QuatVec> {
    check_dim(psi.n(), p.n())?;
    let domain = psi.domain();
    if !domain.contains(p) {
        return Err(Error::OutsideDomain { point: p.coords() });
    }
    (0..p.n())
        .map(|l| dbar_q(psi, l, p, cfg))
        .collect::<Result<Vec<_>>>()
        .map(QuatVec)
}

/// Wirtinger derivatives of `(psi0, psi1)` from real finite differences.
pub fn wirtinger_fd<F: QuaternionicField + ?Sized>(psi: &F, p: &QuatVec, cfg: &FdConfig) -> Result<PairJet> {
    check_dim(psi.n(), p.n())?;
    let half = 0.5;
    let i = C64::new(0.0, 1.0);
    let mut jet = PairJet::zeros(p.n());
    for l in 0..p.n() {
        let d: Vec<Pair> = (0..4)
            .map(|mu| partial(psi, p, 4 * l + mu, cfg))
            .collect::<Result<_>>()?;
        // alpha = x0 + i x1, beta = x3 + i x2
        let w = |c: fn(&Pair) -> C64| Wirtinger {
            d_alpha: (c(&d[0]) - i * c(&d[1])) * half,
            d_alpha_bar: (c(&d[0]) + i * c(&d[1])) * half,
            d_beta: (c(&d[3]) - i * c(&d[2])) * half,
            d_beta_bar: (c(&d[3]) + i * c(&d[2])) * half,
        };
        jet.psi0[l] = w(|p| p.0);
        jet.psi1[l] = w(|p| p.1);
    }
    Ok(jet)
}

/// The residuals `(r1, r2)` per block, interleaved:
/// `r1 = d_beta psi1 - d_alpha_bar psi0`, `r2 = d_alpha psi1 + d_beta_bar psi0`.
pub fn residual_from_jet(jet: &PairJet) -> Vec<C64> {
    jet.psi0
        .iter()
        .zip(&jet.psi1)
        .flat_map(|(w0, w1)| {
            [
                w1.d_beta - w0.d_alpha_bar,
                w1.d_alpha + w0.d_beta_bar,
            ]
        })
        .collect()
}

/// The complex form of `D psi (p)` as `2n` residuals `(r1, r2)` per block.
pub fn cf_residual_complex<F: QuaternionicField + ?Sized>(
    psi: &F,
    p: &QuatVec,
    cfg: &FdConfig,
) -> Result<Vec<C64>> {
    if !psi.domain().contains(p) {
        return Err(Error::OutsideDomain { point: p.coords() });
    }
    Ok(residual_from_jet(&wirtinger_fd(psi, p, cfg)?))
}

/// Rebuilds `D psi` from complex residuals: block `l` equals `2(-r1 + k r2)`.
pub fn quaternionic_from_residual(r: &[C64]) -> Result<QuatVec> {
    if r.is_empty() || !r.len().is_multiple_of(2) {
        return Err(Error::Config("residual vector needs a positive even length".into()));
    }
    Ok(QuatVec(
        r.chunks_exact(2)
            .map(|c| Quaternion::from_pair(-c[0] * 2.0, c[1] * 2.0))
            .collect(),
    ))
}

/// `d F / d z_{row, col}` for a holomorphic `F`, averaging the real and
/// imaginary step directions so that the leading error cancels.
fn complex_partial<F: ComplexField + ?Sized>(
    f: &F,
    z: &CMatrix,
    row: usize,
    col: usize,
    h: f64,
    cfg: &FdConfig,
) -> Result<Pair> {
    let i = C64::new(0.0, 1.0);
    let along = |dir: C64| {
        derivative(
            |t| {
                let mut w = z.clone();
                w.set(row, col, z.get(row, col) + dir * t);
                let v = f.eval(&w);
                if v.0.is_finite() && v.1.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::OutsideDomain {
                        point: w.rows.iter().flat_map(|r| [r[0].re, r[0].im, r[1].re, r[1].im]).collect(),
                    })
                }
            },
            h,
            cfg.scheme,
        )
    };
    let dx = along(C64::new(1.0, 0.0))?;
    let dy = along(i)?;
    Ok((dx - dy * i) * 0.5)
}

/// `D^C F (Z)`: component `A` is `d_{z_{A0'}} psi1 - d_{z_{A1'}} psi0`.
pub fn dc_apply<F: ComplexField + ?Sized>(f: &F, z: &CMatrix, cfg: &FdConfig) -> Result<Vec<C64>> {
    check_dim(2 * f.n(), z.rows.len())?;
    let h = cfg.step_at(z.frobenius())?;
    (0..z.rows.len())
        .map(|a| {
            let d0 = complex_partial(f, z, a, 0, h, cfg)?;
            let d1 = complex_partial(f, z, a, 1, h, cfg)?;
            Ok(d0.1 - d1.0)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonogenicityReport {
    pub field: String,
    pub n: usize,
    pub samples: usize,
    pub tol: f64,
    pub max_residual: f64,
    pub worst_point: QuatVec,
    pub verdict: bool,
}

/// Largest `|D psi|` over the sample, with a verdict against `tol`.
pub fn is_monogenic<F: QuaternionicField + ?Sized>(
    psi: &F,
    samples: &[QuatVec],
    tol: f64,
    cfg: &FdConfig,
) -> Result<MonogenicityReport> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let residuals: Vec<f64> = samples
        .par_iter()
        .map(|p| cf_apply(psi, p, cfg).map(|r| r.norm()))
        .collect::<Result<_>>()?;
    let (worst, max_residual) = residuals
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
    Ok(MonogenicityReport {
        field: psi.name(),
        n: psi.n(),
        samples: samples.len(),
        tol,
        max_residual,
        worst_point: samples[worst].clone(),
        verdict: max_residual <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{BuiltinComplexField, BuiltinField, BuiltinKind};
    use crate::quat::embed_m;
    use crate::sampling::{random_quat_vec, sample_shell, seeded};

    #[test]
    fn conjugate_is_four() {
        // D conj(q) = 1 - i i - j j - k k.
        let f = BuiltinField::by_name("conj_q", 1).unwrap();
        let p = random_quat_vec(1, 1.0, &mut seeded(1));
        let d = cf_apply(&f, &p, &FdConfig::default()).unwrap();
        assert!(d.0[0].approx_eq(Quaternion::new(4.0, 0.0, 0.0, 0.0), 1e-8));
        let f = BuiltinField::by_name("identity_q", 1).unwrap();
        let d = cf_apply(&f, &p, &FdConfig::default()).unwrap();
        assert!(d.0[0].approx_eq(Quaternion::new(-2.0, 0.0, 0.0, 0.0), 1e-8));
    }

    #[test]
    fn complex_form_reproduces_quaternionic_form() {
        let mut rng = seeded(2);
        for name in ["nonmonogenic_quadratic", "nonmonogenic_mixed", "conj_q", "E"] {
            let f = BuiltinField::by_name(name, 2).unwrap();
            for p in sample_shell(2, 0.5, 1.5, 10, &mut rng) {
                let direct = cf_apply(&f, &p, &FdConfig::default()).unwrap();
                let r = cf_residual_complex(&f, &p, &FdConfig::default()).unwrap();
                let rebuilt = quaternionic_from_residual(&r).unwrap();
                assert!(direct.approx_eq(&rebuilt, 1e-9), "{name}");
            }
        }
    }

    #[test]
    fn analytic_jets_agree_with_differences() {
        let mut rng = seeded(3);
        let cfg = FdConfig::richardson(1e-3);
        for name in crate::field::BUILTIN_NAMES {
            let f = BuiltinField::by_name(name, 2).unwrap();
            for p in sample_shell(2, 0.6, 1.4, 5, &mut rng) {
                let exact = f.jet(&p).unwrap();
                let fd = wirtinger_fd(&f, &p, &cfg).unwrap();
                assert!(exact.max_abs_diff(&fd) < 1e-8, "{name}");
            }
        }
    }

    #[test]
    fn mixed_residuals_are_known() {
        let f = BuiltinField::by_name("nonmonogenic_mixed", 1).unwrap();
        let p = random_quat_vec(1, 1.0, &mut seeded(4));
        let (a, _) = p.0[0].to_pair();
        let r = residual_from_jet(&f.jet(&p).unwrap());
        assert!((r[0] - a.conj()).norm() < 1e-15);
        assert!((r[1] - a).norm() < 1e-15);
    }

    #[test]
    fn fundamental_extension_is_holomorphic_monogenic() {
        let f = BuiltinComplexField::by_name("E_ext", 1).unwrap();
        let g = BuiltinComplexField::by_name("identity_ext", 1).unwrap();
        let mut rng = seeded(6);
        for _ in 0..10 {
            let x = random_quat_vec(1, 1.0, &mut rng);
            if x.norm() < 0.5 {
                continue;
            }
            let z = embed_m(&x);
            let r = dc_apply(&f, &z, &FdConfig::default()).unwrap();
            assert!(r.iter().all(|c| c.norm() < 1e-7));
            // identity_ext: row 1 gives d psi1/d z10 = 1.
            let r = dc_apply(&g, &z, &FdConfig::default()).unwrap();
            assert!((r[0].norm()) < 1e-9 && (r[1] - 1.0).norm() < 1e-9);
        }
    }

    #[test]
    fn report_picks_worst_point() {
        let f = BuiltinField::new(BuiltinKind::NonmonogenicQuadratic, 1).unwrap();
        let pts = sample_shell(1, 0.1, 2.0, 20, &mut seeded(9));
        let rep = is_monogenic(&f, &pts, 1e-6, &FdConfig::default()).unwrap();
        assert!(!rep.verdict);
        let worst = pts.iter().map(|p| 4.0 * p.0[0].to_pair().0.norm()).fold(0.0, f64::max);
        assert!((rep.max_residual - worst).abs() < 1e-6);
        assert!(matches!(
            is_monogenic(&f, &[], 1e-6, &FdConfig::default()),
            Err(Error::EmptySample)
        ));
    }

    #[test]
    fn stencil_leaving_domain_is_reported() {
        let e = BuiltinField::by_name("E", 1).unwrap();
        let p = QuatVec(vec![Quaternion::new(1e-6, 0.0, 0.0, 0.0)]);
        let err = cf_apply(&e, &p, &FdConfig::central(1e-6)).unwrap_err();
        assert!(matches!(err, Error::OutsideDomain { .. }));
    }
}
