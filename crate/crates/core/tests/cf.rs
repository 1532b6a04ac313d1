use fueter::cf::*;
use fueter::fd::FdConfig;
use fueter::field::{BuiltinField, QuaternionicField, BUILTIN_NAMES};
use fueter::{Quaternion, QuatVec};
use proptest::prelude::*;

fn point(v: &[f64]) -> QuatVec {
    QuatVec::from_coords(v).unwrap()
}

#[test]
fn hand_computed_values() {
    // D = sum_i e_i d_i gives 4 on conj(q) and -2 on q.
    let x = point(&[0.3, -0.2, 0.7, 0.1]);
    let cfg = FdConfig::default();
    let conj = cf_apply(&BuiltinField::by_name("conj_q", 1).unwrap(), &x, &cfg).unwrap();
    assert!(conj.approx_eq(&QuatVec(vec![Quaternion::new(4.0, 0.0, 0.0, 0.0)]), 1e-8));
    let id = cf_apply(&BuiltinField::by_name("identity_q", 1).unwrap(), &x, &cfg).unwrap();
    assert!(id.approx_eq(&QuatVec(vec![Quaternion::new(-2.0, 0.0, 0.0, 0.0)]), 1e-8));
}

#[test]
fn monogenicity_report_matches_builtin_flags() {
    for name in BUILTIN_NAMES {
        let psi = BuiltinField::by_name(name, 2).unwrap();
        let samples: Vec<QuatVec> = (0..8)
            .map(|k| {
                let t = k as f64 * 0.37;
                point(&[1.0 + t.sin(), t.cos(), -0.5 * t, 0.3, 0.2, -t.sin(), 0.1 * t, 0.9])
            })
            .collect();
        let rep = is_monogenic(&psi, &samples, 1e-6, &FdConfig::default()).unwrap();
        assert_eq!(rep.verdict, psi.is_monogenic(), "{name}: {}", rep.max_residual);
    }
}

#[test]
fn empty_sample_is_an_error() {
    let psi = BuiltinField::by_name("E", 1).unwrap();
    assert!(is_monogenic(&psi, &[], 1e-6, &FdConfig::default()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fundamental_solution_is_monogenic(v in prop::collection::vec(-2.0f64..2.0, 8)) {
        let x = point(&v);
        prop_assume!(x.0[0].norm() > 0.3);
        let e = BuiltinField::by_name("E", 2).unwrap();
        prop_assert!(cf_apply(&e, &x, &FdConfig::richardson(1e-3)).unwrap().norm() < 1e-6);
    }

    #[test]
    fn complex_and_quaternionic_forms_agree(v in prop::collection::vec(-1.0f64..1.0, 4)) {
        let x = point(&v);
        let cfg = FdConfig::default();
        for name in ["nonmonogenic_quadratic", "nonmonogenic_mixed", "conj_q"] {
            let psi = BuiltinField::by_name(name, 1).unwrap();
            let r = cf_residual_complex(&psi, &x, &cfg).unwrap();
            let q = quaternionic_from_residual(&r).unwrap();
            prop_assert!(q.approx_eq(&cf_apply(&psi, &x, &cfg).unwrap(), 1e-7));
        }
    }

    #[test]
    fn analytic_jets_match_differences(v in prop::collection::vec(-1.0f64..1.0, 4)) {
        let x = point(&v);
        prop_assume!(x.norm() > 0.3);
        for name in BUILTIN_NAMES {
            let psi = BuiltinField::by_name(name, 1).unwrap();
            if let Some(jet) = psi.jet(&x) {
                let fd = wirtinger_fd(&psi, &x, &FdConfig::richardson(1e-3)).unwrap();
                prop_assert!(jet.max_abs_diff(&fd) < 1e-6 * (1.0 + x.norm().powi(-4)), "{name}");
            }
        }
    }
}
