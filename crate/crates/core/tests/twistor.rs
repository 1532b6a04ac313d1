use fueter::quat::embed_m;
use fueter::twistor::*;
use fueter::{BiquaternionPoint, QuatVec, C64};
use proptest::prelude::*;

fn qv(v: &[f64]) -> QuatVec {
    QuatVec::from_coords(v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eta_inverts(v in prop::collection::vec(-2.0f64..2.0, 8), zr in -3.0f64..3.0, zi in -3.0f64..3.0) {
        let base = qv(&v);
        let fp = FiberPoint::new(Chart::Zero, C64::new(zr, zi), base.clone());
        let back = eta_inverse(&eta(&fp).unwrap()).unwrap().to_chart(Chart::Zero).unwrap();
        prop_assert!((back.fiber - fp.fiber).norm() < 1e-10);
        prop_assert!(back.base.approx_eq(&base, 1e-10));
    }

    #[test]
    fn lines_of_real_points_are_fibres(v in prop::collection::vec(-2.0f64..2.0, 4), zr in -3.0f64..3.0, zi in -3.0f64..3.0) {
        let x = qv(&v);
        let z = C64::new(zr, zi);
        let one = C64::new(1.0, 0.0);
        let on_line = line_embed(&embed_m(&x), (one, z)).unwrap();
        let fibre = eta(&FiberPoint::new(Chart::Zero, z, x)).unwrap();
        prop_assert!(on_line.projective_distance(&fibre) < 1e-12);
    }

    #[test]
    fn line_points_project_to_slice_points(v in prop::collection::vec(-1.0f64..1.0, 8), t in 0.0..std::f64::consts::PI, p in 0.0..std::f64::consts::TAU) {
        let s = BiquaternionPoint { x: qv(&v[..4]), y: qv(&v[4..]) };
        let pi = (C64::new((t / 2.0).cos(), 0.0), C64::from_polar((t / 2.0).sin(), p));
        let via = sweep_point_via_line(&s.to_matrix(), pi).unwrap();
        prop_assert!(via.approx_eq(&s.slice_point(hopf_quaternion(pi)), 1e-10));
    }
}
