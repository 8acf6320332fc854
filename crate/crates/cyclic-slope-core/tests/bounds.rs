mod common;

use cyclic_slope_core::bounds::{
    blowup_corrections, lower_bound_certificate, upper_bound_certificate, wlevel_invariants,
    BoundsError, SurfaceClassData, UpperVerdict,
};
use cyclic_slope_core::fibration::genus_hypothesis;
use cyclic_slope_core::invariants::{relative_invariants, GlobalModel};
use cyclic_slope_core::rational::q;
use cyclic_slope_core::{lambda_upper, FibrationParams, ParamError, Rational, UpperCase};
use proptest::prelude::*;

#[test]
fn wlevel_examples() {
    assert_eq!(wlevel_invariants(&SurfaceClassData::product(2, 1, 3, 4)), (q(48, 1), q(12, 1)));
    assert_eq!(wlevel_invariants(&SurfaceClassData::product(2, 1, 0, 0)), (q(0, 1), q(0, 1)));
}

#[test]
fn wlevel_ruled_closed_form() {
    for n in 2..=6i64 {
        for k in 1..=6i64 {
            let r = k * n;
            let Ok(p) = FibrationParams::from_branch_degree(r, 0, n) else { continue };
            let g = p.g;
            for m in 1..=50i64 {
                let d = SurfaceClassData::ruled(g, n, r, &Rational::from(m));
                assert!(d.is_consistent());
                let (w, chi) = wlevel_invariants(&d);
                assert_eq!(w, q(4 * (g - 1) * (n - 1) * m, n));
                assert_eq!(chi, q((2 * (2 * n - 1) * (g - 1) + n * (n + 1)) * m, 6 * n));
                let smooth = GlobalModel::smooth(p, m).unwrap();
                let (k2, chif, _) = relative_invariants(&smooth).unwrap();
                assert_eq!((k2, chif), (w, chi));
            }
        }
    }
}

#[test]
fn correction_examples() {
    assert_eq!(blowup_corrections(&[2], 2).unwrap(), (q(0, 1), q(0, 1)));
    assert_eq!(blowup_corrections(&[3], 3).unwrap(), (q(3, 1), q(1, 1)));
    for n in 2..=9 {
        assert_eq!(blowup_corrections(&[0], n).unwrap(), (q(n, 1), q(0, 1)));
    }
    assert_eq!(blowup_corrections(&[2], 3), Err(BoundsError::ModNViolation { mult: 2, n: 3 }));
    assert_eq!(blowup_corrections(&[], 3).unwrap(), (q(0, 1), q(0, 1)));
}

#[test]
fn lower_certificate_examples() {
    let c = lower_bound_certificate(&SurfaceClassData::product(2, 1, 3, 4), &[], 0).unwrap();
    assert!(c.verdict && c.diagnostics.equality);
    assert!(c.hodge_determinant.is_zero() && c.diagnostics.matrix_singular);
    assert!(c.hypotheses.all(), "{:?}", c.hypotheses.failing());

    let d = SurfaceClassData::product(3, 2, 1, 2);
    let c = lower_bound_certificate(&d, &[], 0).unwrap();
    assert_eq!((c.kf2.clone(), c.chif.clone(), c.lambda.clone()), (q(72, 1), q(13, 1), q(72, 13)));
    assert!(c.verdict && c.diagnostics.equality);
    assert_eq!(c.hypotheses.failing(), vec!["genus"]);

    let c = lower_bound_certificate(&d, &[3], 0).unwrap();
    assert_eq!((c.kf2.clone(), c.chif.clone()), (q(69, 1), q(12, 1)));
    assert!(c.verdict && !c.diagnostics.equality);
    assert!(!c.diagnostics.branch_nonsingular);
}

#[test]
fn lower_certificate_grid() {
    let mut checked = 0;
    for n in 2..=6i64 {
        for h in 1..=4i64 {
            for big_n in 1..=10i64 {
                for big_m in 1..=10i64 {
                    let d = SurfaceClassData::product(n, h, big_n, big_m);
                    if !genus_hypothesis(d.g, h, n) {
                        continue;
                    }
                    let c = lower_bound_certificate(&d, &[], 0).unwrap();
                    assert!(c.hypotheses.all(), "{d:?} {:?}", c.hypotheses.failing());
                    assert!(c.verdict, "{d:?}");
                    assert!(c.chain.iter().all(|s| s.holds), "{d:?} {:?}", c.chain);
                    assert!(c.diagnostics.equality && c.diagnostics.matrix_singular);
                    assert!(c.diagnostics.branch_nonsingular && c.diagnostics.slope_equality_on_w);
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 300, "{checked}");
}

#[test]
fn lower_certificate_on_ruled_data() {
    for n in 2..=5i64 {
        for k in 2..=5i64 {
            let r = k * n;
            let Ok(p) = FibrationParams::from_branch_degree(r, 0, n) else { continue };
            let d = SurfaceClassData::ruled(p.g, n, r, &Rational::from(2));
            let c = lower_bound_certificate(&d, &[], 0).unwrap();
            assert!(c.verdict && c.diagnostics.equality);
            assert!(!c.hypotheses.h_positive);
        }
    }
}

#[test]
fn upper_certificate_smooth_examples() {
    let p = FibrationParams::ruled(9, 4).unwrap();
    let c = upper_bound_certificate(&GlobalModel::smooth(p, 1).unwrap()).unwrap();
    assert_eq!(c.upper, q(32, 5));
    assert_eq!(c.slope, Some(q(48, 11)));
    assert_eq!(c.verdict, UpperVerdict::Holds);
    assert!(c.chain_ok);
    assert_eq!(c.constants.case, UpperCase::Small);

    let p = FibrationParams::ruled(15, 4).unwrap();
    let c = upper_bound_certificate(&GlobalModel::smooth(p, 1).unwrap()).unwrap();
    assert_eq!((c.constants.a.clone(), c.constants.b.clone()), (q(105, 62), q(34, 31)));
    assert_eq!(c.eta_coefficient, q(37, 31));
    assert!(c.balance.is_zero() && c.coefficients_ok && c.chain_ok);

    let p = FibrationParams::ruled(15, 4).unwrap();
    let empty = GlobalModel::smooth(p, 0).unwrap();
    assert_eq!(upper_bound_certificate(&empty).unwrap().verdict, UpperVerdict::NotApplicable);

    let p = FibrationParams::ruled(4, 3).unwrap();
    let m = GlobalModel { params: p, m: q(1, 1), germs: vec![], generic_alpha0: 4 };
    assert_eq!(
        upper_bound_certificate(&m).unwrap_err(),
        BoundsError::Param(ParamError::UnsupportedOrder(3))
    );
}

#[test]
fn upper_bound_on_sweep() {
    let mut checked = 0;
    for model in common::sweep_models() {
        let (g, n, r) = (model.params.g, model.params.n, model.params.r);
        if n < 4 || r == n {
            continue;
        }
        let c = upper_bound_certificate(&model).unwrap();
        assert_eq!(c.verdict, UpperVerdict::Holds, "{model:?}");
        assert!(c.chain_ok, "{model:?} {c:?}");
        assert_eq!(c.upper, lambda_upper(g, n).unwrap());
        assert!(c.bound_value >= c.linear_form);
        checked += 1;
    }
    assert!(checked > 500, "{checked}");
}

proptest! {
    #[test]
    fn corrections_additive(n in 2i64..7, a in proptest::collection::vec(0i64..40, 0..6), b in proptest::collection::vec(0i64..40, 0..6)) {
        let fix = |v: Vec<i64>| -> Vec<i64> { v.into_iter().map(|m| n * (m / n) + (m % 2)).collect() };
        let (a, b) = (fix(a), fix(b));
        let (wa, ca) = blowup_corrections(&a, n).unwrap();
        let (wb, cb) = blowup_corrections(&b, n).unwrap();
        let ab: Vec<i64> = a.iter().chain(b.iter()).copied().collect();
        let (w, c) = blowup_corrections(&ab, n).unwrap();
        prop_assert_eq!(w, wa + wb);
        prop_assert_eq!(c, ca + cb);
    }
}
