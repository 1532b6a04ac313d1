//! The acceptance suite: eight seeded checks with pinned tolerances.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cf::{cf_apply, dc_apply};
use crate::cp1::{cohomology_coefficients, harmonic_representative, BumpFixture};
use crate::domain::DomainSpec;
use crate::error::Result;
use crate::fd::FdConfig;
use crate::field::{
    BuiltinComplexField, BuiltinField, BuiltinKind, ComplexField, QuaternionicField, RealRestriction,
};
use crate::hull::{hull_contains, hull_distance, hull_witness, ImUnitSphereSampler, Membership};
use crate::penrose::{
    calibration, diagram_check, penrose_transform, penrose_transform_complex, sharp, sharp_closed,
    ComplexTransformField, PenroseConfig,
};
use crate::quadrature::{quadrature_c, QuadratureConfig};
use crate::quat::{det_biquat, BiquaternionPoint, CMatrix, QuatVec, C64};
use crate::sampling::{random_biquat, random_complex, random_direction, random_quat_vec, sample_shell, seeded};
use crate::twistor::{hull_contains_via_lines, FiberGrid};

pub const C1_TOL: f64 = 1e-6;
pub const C1_STEP: f64 = 1e-5;
pub const C2_TOL: f64 = 1e-6;
pub const C2_RESTRICTION_TOL: f64 = 1e-12;
pub const C2_MIN_DET: f64 = 0.1;
pub const C3_MIN_AGREEMENT: f64 = 0.995;
pub const C3_MIN_DET: f64 = 1e-3;
pub const C4_DISTANCE_TOL: f64 = 1e-6;
pub const C4_WITNESS_REL_TOL: f64 = 1e-3;
pub const C5_COEFF_TOL: f64 = 1e-6;
pub const C5_EXACT_TOL: f64 = 1e-5;
pub const C5_NORMALISATION_TOL: f64 = 1e-8;
pub const C6_TOL: f64 = 1e-4;
pub const C7_TOL: f64 = 1e-4;
pub const C8_TOL: f64 = 1e-4;
pub const C8_MIN_DET: f64 = 0.3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    /// The worst measured value.
    pub measured: f64,
    pub threshold: f64,
    pub detail: String,
}

impl CriterionResult {
    fn new(id: u8, name: &str, measured: f64, threshold: f64, passed: bool, detail: String) -> Self {
        Self {
            id,
            name: name.into(),
            passed,
            measured,
            threshold,
            detail,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {}: {} (measured {:.3e}, threshold {:.3e}) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.measured,
            self.threshold,
            self.detail
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub n: usize,
    pub seed: u64,
    pub passed: bool,
    pub criteria: Vec<CriterionResult>,
}

fn errored(id: u8, name: &str, e: crate::Error) -> CriterionResult {
    CriterionResult::new(id, name, f64::NAN, f64::NAN, false, format!("error: {e}"))
}

/// Points with `r_min < |q_1| < r_max` (uniform by volume) and the remaining
/// blocks uniform in `[-1, 1]^4`.
fn first_block_shell<R: Rng>(n: usize, r_min: f64, r_max: f64, count: usize, rng: &mut R) -> Vec<QuatVec> {
    sample_shell(1, r_min, r_max, count, rng)
        .into_iter()
        .map(|q| {
            let mut v = random_quat_vec(n, 1.0, rng);
            v.0[0] = q.0[0];
            v
        })
        .collect()
}

/// `D E` by central differences over `0.2 < |q_1| < 5`.
pub fn criterion_1(n: usize, seed: u64) -> Result<CriterionResult> {
    let e = BuiltinField::by_name("E", n)?;
    let mut rng = seeded(seed ^ 0x01);
    let pts = first_block_shell(n, 0.2, 5.0, 1000, &mut rng);
    let cfg = FdConfig::central(C1_STEP);
    let mut worst: f64 = 0.0;
    let mut at = 0.0;
    let closest = pts.iter().map(|p| p.0[0].norm()).fold(f64::INFINITY, f64::min);
    for p in &pts {
        let r = cf_apply(&e, p, &cfg)?.norm();
        if r > worst {
            worst = r;
            at = p.0[0].norm();
        }
    }
    Ok(CriterionResult::new(
        1,
        "fundamental solution is monogenic",
        worst,
        C1_TOL,
        worst < C1_TOL,
        format!("1000 points, worst at |q_1| = {at:.3}, smallest |q_1| = {closest:.3}"),
    ))
}

fn random_gl2<R: Rng>(min_det: f64, rng: &mut R) -> CMatrix {
    loop {
        let z = CMatrix {
            rows: vec![
                [random_complex(1.0, rng), random_complex(1.0, rng)],
                [random_complex(1.0, rng), random_complex(1.0, rng)],
            ],
        };
        if z.det2().norm() > min_det {
            return z;
        }
    }
}

/// `D^C` of `(z11, -z10) / det^2` and its restriction to the real slice.
pub fn criterion_2(seed: u64) -> Result<CriterionResult> {
    let ext = BuiltinComplexField::by_name("E_ext", 1)?;
    let e = BuiltinField::by_name("E", 1)?;
    let mut rng = seeded(seed ^ 0x02);
    let cfg = FdConfig::default();
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let z = random_gl2(C2_MIN_DET, &mut rng);
        let r = dc_apply(&ext, &z, &cfg)?;
        worst = r.iter().map(|c| c.norm()).fold(worst, f64::max);
    }
    let mut restriction: f64 = 0.0;
    for x in sample_shell(1, 0.2, 5.0, 1000, &mut rng) {
        let a = RealRestriction(&ext).pair(&x);
        let b = e.pair(&x);
        restriction = restriction.max(a.max_abs_diff(b));
    }
    Ok(CriterionResult::new(
        2,
        "holomorphic extension of the fundamental solution",
        worst,
        C2_TOL,
        worst < C2_TOL && restriction < C2_RESTRICTION_TOL,
        format!("1000 points with |det| > {C2_MIN_DET}; real-slice restriction error {restriction:.3e}"),
    ))
}

/// The sphere-based and line-based hull tests agree.
pub fn criterion_3(n: usize, seed: u64) -> Result<CriterionResult> {
    let sampler = ImUnitSphereSampler::default();
    let grid = FiberGrid::default();
    let mut rng = seeded(seed ^ 0x03);
    let mut worst_rate: f64 = 1.0;
    let mut band_violations = 0usize;
    let mut details = Vec::new();
    for (domain, scale) in [(DomainSpec::ball(n, 1.0), 0.5 / (n as f64).sqrt()), (DomainSpec::punctured(n), 1.0)] {
        let mut agree = 0usize;
        let mut inside = 0usize;
        for _ in 0..1000 {
            let s = random_biquat(n, scale, &mut rng);
            let a = hull_contains(&s, &domain, &sampler)?;
            let b = hull_contains_via_lines(&s, &domain, &grid)?;
            if a.verdict == b.verdict {
                agree += 1;
            } else if a.membership != Membership::Indeterminate && b.membership != Membership::Indeterminate {
                band_violations += 1;
            }
            inside += a.verdict as usize;
        }
        let rate = agree as f64 / 1000.0;
        worst_rate = worst_rate.min(rate);
        details.push(format!("{}: agreement {rate:.4} ({inside} inside)", short(&domain)));
    }
    let u = DomainSpec::punctured(1);
    let mut det_checked = 0usize;
    let mut det_mismatch = 0usize;
    for _ in 0..1000 {
        let s = random_biquat(1, 1.0, &mut rng);
        let det = det_biquat(&s)?;
        if det.norm() <= C3_MIN_DET {
            continue;
        }
        det_checked += 1;
        let a = hull_contains(&s, &u, &sampler)?;
        let b = hull_contains_via_lines(&s, &u, &grid)?;
        if !(a.verdict && b.verdict) {
            det_mismatch += 1;
        }
    }
    details.push(format!("n = 1 punctured: {det_mismatch} of {det_checked} disagree with det != 0"));
    if band_violations > 0 {
        details.push(format!("{band_violations} disagreements outside the band"));
    }
    Ok(CriterionResult::new(
        3,
        "hull by spheres equals hull by twistor lines",
        worst_rate,
        C3_MIN_AGREEMENT,
        worst_rate >= C3_MIN_AGREEMENT && band_violations == 0 && det_mismatch == 0,
        details.join("; "),
    ))
}

fn short(d: &DomainSpec) -> &'static str {
    match d {
        DomainSpec::Ball { .. } => "ball",
        DomainSpec::PointComplement { .. } => "punctured",
        _ => "domain",
    }
}

/// Distance to the hull complement and its witnesses.
pub fn criterion_4(n: usize, seed: u64) -> Result<CriterionResult> {
    let sampler = ImUnitSphereSampler::default();
    let mut rng = seeded(seed ^ 0x04);
    let mut real_err: f64 = 0.0;
    for _ in 0..20 {
        let r = rng.random_range(0.5..3.0);
        let u = DomainSpec::ball(n, r);
        let c = random_direction(n, &mut rng).scale(rng.random_range(0.0..0.95) * r);
        let d = hull_distance(&BiquaternionPoint::real(c.clone()), &u, &sampler)?;
        real_err = real_err.max((d - (r - c.norm()) / std::f64::consts::SQRT_2).abs());
    }
    let mut witness_rel: f64 = 0.0;
    let mut witness_inside = 0usize;
    let mut closer = 0usize;
    let mut probed = 0usize;
    let mut found = 0usize;
    for domain in [DomainSpec::ball(n, 1.0), DomainSpec::punctured(n)] {
        let mut done = 0;
        while done < 50 {
            let s = random_biquat(n, 0.4, &mut rng);
            let q = hull_contains(&s, &domain, &sampler)?;
            if q.membership != Membership::Inside {
                continue;
            }
            done += 1;
            let d = q.inf_value / std::f64::consts::SQRT_2;
            let band = q.band / std::f64::consts::SQRT_2;
            let w = hull_witness(&s, &domain, &sampler)?;
            witness_rel = witness_rel.max((w.distance - d).abs() / d);
            if hull_contains(&w.point, &domain, &sampler)?.verdict {
                witness_inside += 1;
            }
            // Points on the segment to the witness short of `d - band` stay inside.
            for k in 1..10 {
                let t = (d - band).max(0.0) / d * k as f64 / 10.0;
                let p = BiquaternionPoint {
                    x: &s.x + &(&w.point.x - &s.x).scale(t),
                    y: &s.y + &(&w.point.y - &s.y).scale(t),
                };
                probed += 1;
                if !hull_contains(&p, &domain, &sampler)?.verdict {
                    found += 1;
                    closer += 1;
                }
            }
            for _ in 0..10 {
                let t = rng.random_range(0.0..4.0) * d;
                let dx = random_direction(n, &mut rng);
                let dy = random_direction(n, &mut rng);
                let mix: f64 = rng.random_range(0.0..1.0);
                let step = BiquaternionPoint {
                    x: dx.scale(mix.sqrt() * t),
                    y: dy.scale((1.0 - mix).sqrt() * t),
                };
                let p = BiquaternionPoint {
                    x: &s.x + &step.x,
                    y: &s.y + &step.y,
                };
                probed += 1;
                if !hull_contains(&p, &domain, &sampler)?.verdict {
                    found += 1;
                    if p.distance(&s) < d - band {
                        closer += 1;
                    }
                }
            }
        }
    }
    let passed =
        real_err < C4_DISTANCE_TOL && witness_rel < C4_WITNESS_REL_TOL && witness_inside == 0 && closer == 0;
    Ok(CriterionResult::new(
        4,
        "distance to the hull complement",
        witness_rel,
        C4_WITNESS_REL_TOL,
        passed,
        format!(
            "real-point error {real_err:.3e}; {witness_inside} witnesses inside; \
             {found} of {probed} probes outside, {closer} closer than distance minus band"
        ),
    ))
}

/// Cohomology coefficients on `CP^1`.
pub fn criterion_5(seed: u64) -> Result<CriterionResult> {
    let mut rng = seeded(seed ^ 0x05);
    let cfg = QuadratureConfig::default();
    let mut coeff_err: f64 = 0.0;
    for _ in 0..100 {
        let a0 = random_complex(2.0, &mut rng);
        let a1 = random_complex(2.0, &mut rng);
        let a = cohomology_coefficients(&harmonic_representative(a0, a1), &cfg)?;
        coeff_err = coeff_err.max((a[0] - a0).norm()).max((a[1] - a1).norm());
    }
    // Stopping rule only; the exactness threshold is C5_EXACT_TOL.
    let bump_cfg = QuadratureConfig {
        tol: 1e-8,
        max_levels: 6,
        ..Default::default()
    };
    let mut exact: f64 = 0.0;
    for _ in 0..20 {
        let b = BumpFixture {
            centre: random_complex(1.5, &mut rng),
            radius: rng.random_range(0.5..2.0),
            c0: random_complex(1.0, &mut rng),
            c1: random_complex(1.0, &mut rng),
        };
        let a = cohomology_coefficients(&b.exact_form(-3), &bump_cfg)?;
        exact = a.iter().map(|c| c.norm()).fold(exact, f64::max);
    }
    let norm = quadrature_c(|z| C64::new(2.0 / (1.0 + z.norm_sqr()).powi(3), 0.0), &cfg)?;
    let norm_err = (norm - 1.0).norm();
    Ok(CriterionResult::new(
        5,
        "cohomology coefficients of CP^1 line bundles",
        coeff_err,
        C5_COEFF_TOL,
        coeff_err < C5_COEFF_TOL && exact < C5_EXACT_TOL && norm_err < C5_NORMALISATION_TOL,
        format!("exact bump forms up to {exact:.3e}; normalisation error {norm_err:.3e}"),
    ))
}

fn monogenic_fixtures(n: usize) -> Result<Vec<BuiltinField>> {
    Ok(vec![
        BuiltinField::new(
            BuiltinKind::Constant {
                c0: C64::new(0.7, -1.3),
                c1: C64::new(-0.4, 0.25),
            },
            n,
        )?,
        BuiltinField::by_name("linear_monogenic", n)?,
        BuiltinField::by_name("E", n)?,
    ])
}

fn base_points(n: usize, count: usize, seed: u64) -> Vec<QuatVec> {
    first_block_shell(n, 0.5, 2.0, count, &mut seeded(seed))
}

/// `P(sharp psi) = psi` for monogenic fixtures.
pub fn criterion_6(n: usize, seed: u64) -> Result<CriterionResult> {
    let cfg = PenroseConfig::default();
    let pts = base_points(n, 20, seed ^ 0x06);
    let mut worst: f64 = 0.0;
    let mut details = Vec::new();
    for psi in monogenic_fixtures(n)? {
        let mut err: f64 = 0.0;
        for x in &pts {
            let v = penrose_transform(&sharp(&psi), x, &cfg)?;
            err = err.max(v.psi.max_abs_diff(psi.pair(x)));
        }
        details.push(format!("{} {err:.2e}", psi.name()));
        worst = worst.max(err);
    }
    Ok(CriterionResult::new(
        6,
        "Penrose transform inverts sharp",
        worst,
        C6_TOL,
        worst < C6_TOL,
        details.join(", "),
    ))
}

/// The calibrated diagram commutes.
pub fn criterion_7(n: usize, seed: u64) -> Result<CriterionResult> {
    let cfg = PenroseConfig::default();
    let cal = calibration()?;
    let pts = base_points(n, 10, seed ^ 0x07);
    let mut worst: f64 = 0.0;
    let mut details = vec![format!("kappa = {:.6}", cal.kappa)];
    for name in ["nonmonogenic_mixed", "conj_q", "identity_q"] {
        let psi = BuiltinField::by_name(name, n)?;
        let rep = diagram_check(&psi, &pts, &cal, &cfg)?;
        worst = worst.max(rep.max_residual);
        details.push(format!("{name} residual {:.2e} size {:.2}", rep.max_residual, rep.max_magnitude));
    }
    let mut vanish: f64 = 0.0;
    for psi in monogenic_fixtures(n)? {
        let rep = diagram_check(&psi, &pts, &cal, &cfg)?;
        vanish = vanish.max(rep.max_magnitude);
    }
    details.push(format!("monogenic sides up to {vanish:.2e}"));
    Ok(CriterionResult::new(
        7,
        "commutative diagram with the Cauchy-Fueter operator",
        worst.max(vanish),
        C7_TOL,
        worst < C7_TOL && vanish < C7_TOL,
        details.join("; "),
    ))
}

/// The complexified transform of `sharp E` is the holomorphic extension.
pub fn criterion_8(seed: u64) -> Result<CriterionResult> {
    let cfg = PenroseConfig::default();
    let sampler = ImUnitSphereSampler::default();
    let e = BuiltinField::by_name("E", 1)?;
    let ext = BuiltinComplexField::by_name("E_ext", 1)?;
    let form = sharp_closed(&e, cfg.jet_fd);
    let domain = DomainSpec::punctured(1);
    let mut rng = seeded(seed ^ 0x08);
    let mut value_err: f64 = 0.0;
    let mut dc_res: f64 = 0.0;
    let mut accepted = 0;
    while accepted < 20 {
        let s = BiquaternionPoint {
            x: random_quat_vec(1, 1.0, &mut rng),
            y: random_quat_vec(1, 0.4, &mut rng),
        };
        if det_biquat(&s)?.norm() <= C8_MIN_DET || !hull_contains(&s, &domain, &sampler)?.verdict {
            continue;
        }
        accepted += 1;
        let got = penrose_transform_complex(&form, &s, &sampler, &cfg)?;
        value_err = value_err.max(got.max_abs_diff(ext.eval(&s.to_matrix())));
        let field = ComplexTransformField::at(&form, &s, &cfg.quad)?;
        let r = dc_apply(&field, &s.to_matrix(), &FdConfig::default())?;
        dc_res = r.iter().map(|c| c.norm()).fold(dc_res, f64::max);
    }
    // Real slice: the complexified transform and the transform share one path.
    let mut slice_exact = true;
    for x in base_points(1, 20, seed ^ 0x06) {
        let a = penrose_transform_complex(&form, &BiquaternionPoint::real(x.clone()), &sampler, &cfg)?;
        let b = penrose_transform(&form, &x, &cfg)?.psi;
        slice_exact &= a == b;
    }
    Ok(CriterionResult::new(
        8,
        "complexified transform is the holomorphic extension",
        value_err.max(dc_res),
        C8_TOL,
        value_err < C8_TOL && dc_res < C8_TOL && slice_exact,
        format!(
            "value error {value_err:.2e}; D^C residual {dc_res:.2e}; real slice {}",
            if slice_exact { "bitwise equal" } else { "differs" }
        ),
    ))
}

pub const CRITERION_NAMES: [&str; 8] = [
    "fundamental solution is monogenic",
    "holomorphic extension of the fundamental solution",
    "hull by spheres equals hull by twistor lines",
    "distance to the hull complement",
    "cohomology coefficients of CP^1 line bundles",
    "Penrose transform inverts sharp",
    "commutative diagram with the Cauchy-Fueter operator",
    "complexified transform is the holomorphic extension",
];

/// Runs one criterion, turning errors into a failed result.
pub fn run_criterion(id: u8, n: usize, seed: u64) -> CriterionResult {
    let r = match id {
        1 => criterion_1(n, seed),
        2 => criterion_2(seed),
        3 => criterion_3(n, seed),
        4 => criterion_4(n, seed),
        5 => criterion_5(seed),
        6 => criterion_6(n, seed),
        7 => criterion_7(n, seed),
        8 => criterion_8(seed),
        _ => Err(crate::Error::Config(format!("no criterion {id}"))),
    };
    let name = CRITERION_NAMES.get(id.wrapping_sub(1) as usize).copied().unwrap_or("unknown");
    r.unwrap_or_else(|e| errored(id, name, e))
}

pub fn verify_all(n: usize, seed: u64) -> VerifyReport {
    let criteria: Vec<CriterionResult> = (1..=8).map(|id| run_criterion(id, n, seed)).collect();
    VerifyReport {
        n,
        seed,
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    }
}
