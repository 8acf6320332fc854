use cyclic_slope_core::rational::q;
use cyclic_slope_core::{
    derive_r, lambda_lower, lambda_upper, slope_constants, FibrationParams, ParamError, Rational,
    UpperCase,
};
use proptest::prelude::*;

fn frac(p: i128, d: i128) -> Rational {
    let g = num_integer::gcd(p, d);
    q((p / g) as i64, (d / g) as i64)
}

#[test]
fn closed_forms_for_small_orders() {
    for g in 2..=200i64 {
        let gi = g as i128;
        assert_eq!(lambda_lower(g, 0, 2).unwrap().lambda, frac(4 * gi - 4, gi), "n=2 g={g}");
        assert_eq!(
            lambda_lower(g, 0, 3).unwrap().lambda,
            frac(24 * (gi - 1), 5 * gi + 1),
            "n=3 g={g}"
        );
        assert_eq!(
            lambda_lower(g, 0, 4).unwrap().lambda,
            frac(36 * (gi - 1), 7 * gi + 3),
            "n=4 g={g}"
        );
    }
}

#[test]
fn lower_bound_in_terms_of_r() {
    // 8 / (1 + r(n+1)/(6(g-1))) for h = 0, written as 48(g-1) / (6(g-1) + r(n+1)).
    for n in 2..=8i64 {
        for k in 1..=30i64 {
            let r = k * n;
            let Ok(p) = FibrationParams::from_branch_degree(r, 0, n) else { continue };
            let g = p.g as i128;
            let expected = frac(48 * (g - 1), 6 * (g - 1) + (r as i128) * (n as i128 + 1));
            assert_eq!(p.lambda().unwrap(), expected, "n={n} r={r}");
        }
    }
}

#[test]
fn branch_degree_roundtrip() {
    for n in 2..=10i64 {
        for h in 0..=4i64 {
            for r in (n..=12 * n).step_by(n as usize) {
                if let Ok(p) = FibrationParams::from_branch_degree(r, h, n) {
                    assert_eq!(p.r, r);
                    assert_eq!(derive_r(p.g, h, n), Ok(r));
                }
            }
        }
    }
}

#[test]
fn rejected_parameters() {
    assert_eq!(derive_r(1, 0, 2), Err(ParamError::InvalidGenus(1)));
    assert_eq!(derive_r(5, 0, 1), Err(ParamError::InvalidOrder(1)));
    assert_eq!(derive_r(5, -1, 2), Err(ParamError::InvalidQuotientGenus(-1)));
    assert!(matches!(derive_r(2, 2, 2), Err(ParamError::NonPositiveR(_))));
}

#[test]
fn genus_hypothesis_flag() {
    let b = lambda_lower(10, 2, 3).unwrap();
    assert_eq!(b.genus_hypothesis, Some(false));
    let b = lambda_lower(41, 2, 3).unwrap();
    assert_eq!(b.genus_hypothesis, Some(true));
}

#[test]
fn upper_anchor_values() {
    assert_eq!(lambda_upper(9, 4).unwrap(), q(32, 5));
    assert_eq!(lambda_upper(21, 4).unwrap(), q(10, 1));
    assert_eq!(lambda_upper(15, 4).unwrap(), q(273, 31));
    assert_eq!(lambda_upper(16, 5).unwrap(), q(15, 2));
    let c = slope_constants(15, 4).unwrap();
    assert_eq!(c.a, q(105, 62));
    assert_eq!(c.b, q(34, 31));
    assert_eq!(c.eta_coefficient(), q(37, 31));
    assert_eq!(c.balance(), q(0, 1));
    assert_eq!(c.case, UpperCase::Large);
    assert_eq!(slope_constants(9, 4).unwrap().case, UpperCase::Small);
}

#[test]
fn upper_undefined_at_r_equal_n() {
    assert_eq!(lambda_upper(3, 4), Err(ParamError::DegenerateUpper { r: 4, n: 4 }));
    assert_eq!(lambda_upper(6, 5), Err(ParamError::DegenerateUpper { r: 5, n: 5 }));
}

#[test]
fn large_case_constants() {
    let mut checked = 0;
    for n in 4..=20i64 {
        let mut r = n * (n - 1);
        while r <= n * (n - 1) + 40 * n {
            if let Ok(p) = FibrationParams::from_branch_degree(r, 0, n) {
                let c = slope_constants(p.g, n).unwrap();
                assert_eq!(c.case, UpperCase::Large);
                assert_eq!(c.balance(), q(0, 1), "n={n} r={r}");
                assert!(c.eta_coefficient().is_positive(), "n={n} r={r}");
                checked += 1;
            }
            r += n;
        }
    }
    assert!(checked > 300);
}

proptest! {
    #[test]
    fn lower_below_twelve(n in 2i64..12, k in 1i64..60, h in 0i64..5) {
        if let Ok(p) = FibrationParams::from_branch_degree(k * n, h, n) {
            if let Ok(b) = lambda_lower(p.g, h, n) {
                prop_assert!(b.lambda < 12);
                prop_assert!(b.admissible);
            }
        }
    }

    #[test]
    fn upper_exceeds_lower(n in 4i64..12, k in 2i64..60) {
        if let Ok(p) = FibrationParams::from_branch_degree(k * n, 0, n) {
            let up = lambda_upper(p.g, n).unwrap();
            prop_assert!(up > p.lambda().unwrap());
            prop_assert!(up < 12);
        }
    }
}
