use fueter::domain::DomainSpec;
use fueter::hull::*;
use fueter::quat::det_biquat;
use fueter::twistor::{hull_contains_via_lines, FiberGrid};
use fueter::{BiquaternionPoint, Quaternion, QuatVec};
use proptest::prelude::*;

/// `sup_{q in S^2} |x + y q|^2 = |x|^2 + |y|^2 + 2 |Im sum conj(y_l) x_l|`.
fn ball_margin(s: &BiquaternionPoint, r: f64) -> f64 {
    let mut m = Quaternion::ZERO;
    for (x, y) in s.x.0.iter().zip(&s.y.0) {
        m += y.conj() * *x;
    }
    let im = (m.norm_sqr() - m.re() * m.re()).max(0.0).sqrt();
    r - (s.x.norm_sqr() + s.y.norm_sqr() + 2.0 * im).sqrt()
}

fn biquat(n: usize, v: &[f64]) -> BiquaternionPoint {
    BiquaternionPoint {
        x: QuatVec::from_coords(&v[..4 * n]).unwrap(),
        y: QuatVec::from_coords(&v[4 * n..8 * n]).unwrap(),
    }
}

#[test]
fn singular_point_is_outside_punctured_hull() {
    // 1 + i q with q = i vanishes on the sphere.
    let s = BiquaternionPoint {
        x: QuatVec(vec![Quaternion::ONE]),
        y: QuatVec(vec![Quaternion::I]),
    };
    let u = DomainSpec::punctured(1);
    assert!(det_biquat(&s).unwrap().norm() < 1e-15);
    assert!(!hull_contains(&s, &u, &ImUnitSphereSampler::default()).unwrap().verdict);
    assert!(!hull_contains_via_lines(&s, &u, &FiberGrid::default()).unwrap().verdict);
}

#[test]
fn distance_of_real_points_to_punctured_hull() {
    let u = DomainSpec::punctured(1);
    let x = QuatVec(vec![Quaternion::new(0.3, -0.4, 1.2, 0.0)]);
    let d = hull_distance(&BiquaternionPoint::real(x.clone()), &u, &ImUnitSphereSampler::default()).unwrap();
    assert!((d - x.norm() / std::f64::consts::SQRT_2).abs() < 1e-12);
}

#[test]
fn distance_outside_hull_is_an_error() {
    let u = DomainSpec::ball(1, 1.0);
    let s = BiquaternionPoint::real(QuatVec(vec![Quaternion::new(2.0, 0.0, 0.0, 0.0)]));
    let r = hull_distance(&s, &u, &ImUnitSphereSampler::default());
    assert!(matches!(r, Err(fueter::Error::NotInHull { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ball_hull_matches_closed_form(v in prop::collection::vec(-0.6f64..0.6, 16)) {
        let s = biquat(2, &v);
        let u = DomainSpec::ball(2, 1.0);
        let exact = ball_margin(&s, 1.0);
        let a = hull_contains(&s, &u, &ImUnitSphereSampler::default()).unwrap();
        prop_assert!((a.margin - exact).abs() < 1e-8, "{} vs {}", a.margin, exact);
        let b = hull_contains_via_lines(&s, &u, &FiberGrid::default()).unwrap();
        prop_assert!((b.margin - exact).abs() < 1e-8, "{} vs {}", b.margin, exact);
    }

    #[test]
    fn punctured_hull_is_nonvanishing_det(v in prop::collection::vec(-1.0f64..1.0, 8)) {
        let s = biquat(1, &v);
        let det = det_biquat(&s).unwrap().norm();
        prop_assume!(det > 1e-3);
        let u = DomainSpec::punctured(1);
        prop_assert!(hull_contains(&s, &u, &ImUnitSphereSampler::default()).unwrap().verdict);
        prop_assert!(hull_contains_via_lines(&s, &u, &FiberGrid::default()).unwrap().verdict);
    }

    #[test]
    fn witness_realises_distance(v in prop::collection::vec(-0.3f64..0.3, 8)) {
        let s = biquat(1, &v);
        prop_assume!(ball_margin(&s, 1.0) > 0.05);
        let u = DomainSpec::ball(1, 1.0);
        let sampler = ImUnitSphereSampler::default();
        let d = hull_distance(&s, &u, &sampler).unwrap();
        let w = hull_witness(&s, &u, &sampler).unwrap();
        prop_assert!((w.distance - d).abs() < 1e-3 * d);
        prop_assert!(ball_margin(&w.point, 1.0) < 1e-8);
    }
}
