use fueter::cp1::*;
use fueter::quadrature::{quadrature_c, QuadratureConfig};
use fueter::C64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Midpoint rule for `(1/pi) int_C g dA` after `x = tan u`, `y = tan v`.
fn tan_riemann(g: impl Fn(C64) -> C64, n: usize) -> C64 {
    let h = std::f64::consts::PI / n as f64;
    let mut acc = c(0.0, 0.0);
    for i in 0..n {
        let u = -std::f64::consts::FRAC_PI_2 + (i as f64 + 0.5) * h;
        let (x, jx) = (u.tan(), 1.0 / u.cos().powi(2));
        for j in 0..n {
            let v = -std::f64::consts::FRAC_PI_2 + (j as f64 + 0.5) * h;
            let (y, jy) = (v.tan(), 1.0 / v.cos().powi(2));
            acc += g(c(x, y)) * (jx * jy);
        }
    }
    acc * (h * h / std::f64::consts::PI)
}

#[test]
fn normalisation_integrals() {
    let cfg = QuadratureConfig::default();
    let w = |z: C64| 2.0 / (1.0 + z.norm_sqr()).powi(3);
    assert!((quadrature_c(|z| c(w(z), 0.0), &cfg).unwrap() - 1.0).norm() < 1e-10);
    assert!((quadrature_c(|z| z * z.conj() * w(z), &cfg).unwrap() - 1.0).norm() < 1e-10);
    assert!(quadrature_c(|z| z.conj() * w(z), &cfg).unwrap().norm() < 1e-12);
}

#[test]
fn harmonic_representative_round_trip() {
    let cfg = QuadratureConfig::default();
    for (a0, a1) in [(c(1.0, 0.0), c(0.0, 0.0)), (c(0.3, -1.2), c(2.0, 0.5)), (c(0.0, 0.0), c(-1.0, 1.0))] {
        let coeffs = cohomology_coefficients(&harmonic_representative(a0, a1), &cfg).unwrap();
        assert_eq!(coeffs.len(), 2);
        assert!((coeffs[0] - a0).norm() < 1e-6 && (coeffs[1] - a1).norm() < 1e-6);
    }
}

fn bump_cfg() -> QuadratureConfig {
    QuadratureConfig {
        tol: 1e-9,
        max_levels: 6,
        ..Default::default()
    }
}

#[test]
fn exact_forms_have_zero_coefficients() {
    let fixtures = [
        BumpFixture { centre: c(0.0, 0.0), radius: 1.0, c0: c(1.0, 0.0), c1: c(0.0, 0.0) },
        BumpFixture { centre: c(0.7, -0.4), radius: 0.8, c0: c(0.2, 1.0), c1: c(-1.0, 0.3) },
        BumpFixture { centre: c(-2.0, 1.0), radius: 1.5, c0: c(0.0, -0.5), c1: c(0.4, 0.4) },
    ];
    for b in fixtures {
        let w = b.exact_form(-3);
        assert!(validate_form(&w, &annulus_sample()).passes(1e-12));
        let a = cohomology_coefficients(&w, &bump_cfg()).unwrap();
        assert!(a.iter().all(|v| v.norm() < 1e-6), "{a:?}");
    }
}

#[test]
fn degree_minus_two_matches_riemann_sum() {
    let h0 = |z: C64| (c(2.0, 0.0) + z * c(0.5, -0.25) + z.conj() * z.conj() * 0.1) / (1.0 + z.norm_sqr()).powi(3);
    let w = Form01::from_chart0(-2, h0);
    assert!(validate_form(&w, &annulus_sample()).passes(1e-12));
    let a = cohomology_coefficients(&w, &QuadratureConfig::default()).unwrap();
    assert_eq!(a.len(), 1);
    let oracle = tan_riemann(h0, 2000);
    assert!((a[0] - oracle).norm() < 1e-5, "{} vs {}", a[0], oracle);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn coefficients_are_linear(
        a in (-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0),
        s in (-1.0f64..1.0, -1.0f64..1.0),
        t in (-1.0f64..1.0, -1.0f64..1.0),
    ) {
        let cfg = QuadratureConfig::default();
        let w1 = harmonic_representative(c(a.0, a.1), c(a.2, a.3));
        let w2 = Form01::from_chart0(-3, |z| (z + 1.0) * (-z.norm_sqr()).exp());
        let (s, t) = (c(s.0, s.1), c(t.0, t.1));
        let combo = w1.combine(s, &w2, t).unwrap();
        let lhs = cohomology_coefficients(&combo, &cfg).unwrap();
        let a1 = cohomology_coefficients(&w1, &cfg).unwrap();
        let a2 = cohomology_coefficients(&w2, &cfg).unwrap();
        for i in 0..2 {
            prop_assert!((lhs[i] - (s * a1[i] + t * a2[i])).norm() < 1e-8);
        }
    }

    #[test]
    fn exact_part_leaves_class_unchanged(
        a in (-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0),
        centre in (-1.0f64..1.0, -1.0f64..1.0),
        radius in 0.5f64..2.0,
    ) {
        let w = harmonic_representative(c(a.0, a.1), c(a.2, a.3));
        let b = BumpFixture { centre: c(centre.0, centre.1), radius, c0: c(1.0, -1.0), c1: c(0.5, 0.0) };
        let sum = w.combine(c(1.0, 0.0), &b.exact_form(-3), c(1.0, 0.0)).unwrap();
        let base = cohomology_coefficients(&w, &bump_cfg()).unwrap();
        let shifted = cohomology_coefficients(&sum, &bump_cfg()).unwrap();
        for i in 0..2 {
            prop_assert!((base[i] - shifted[i]).norm() < 1e-5);
        }
    }

    #[test]
    fn harmonic_forms_decay(a in (-5.0f64..5.0, -5.0f64..5.0), b in (-5.0f64..5.0, -5.0f64..5.0)) {
        let w = harmonic_representative(c(a.0, a.1), c(b.0, b.1));
        for l in 0..=1 {
            prop_assert!(decay_check(DecayTarget::Form(&w), l, 0).unwrap().passed);
        }
    }
}
