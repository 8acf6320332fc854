use std::collections::HashMap;

use cyclic_slope_core::fixed_points::{
    blowup_transition, coprime_shift_check, resolvable_search, FixedPointType, OutcomeKind,
};
use num_integer::Integer;
use proptest::prelude::*;

fn isolated_types(n: i64) -> Vec<FixedPointType> {
    let mut out = Vec::new();
    for k1 in 1..n {
        for k2 in 1..n {
            if let Ok(t) = FixedPointType::new(k1, k2, n) {
                out.push(t);
            }
        }
    }
    out
}

/// Depth-bounded recursion on a single type: a type clears within `depth`
/// blow-ups if it is diagonal or both isolated children clear within
/// `depth - 1`. A shortest clearing tree never repeats a type along a branch,
/// so `depth = n^2` decides the question.
fn clears_within(
    a: i64,
    b: i64,
    n: i64,
    depth: usize,
    memo: &mut HashMap<(i64, i64, usize), bool>,
) -> bool {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    if a == b {
        return true;
    }
    if depth == 0 {
        return false;
    }
    if let Some(&v) = memo.get(&(a, b, depth)) {
        return v;
    }
    let kids = [(a, (b - a).rem_euclid(n)), ((a - b).rem_euclid(n), b)];
    let v = kids
        .iter()
        .filter(|(x, y)| *x != 0 && *y != 0)
        .all(|&(x, y)| clears_within(x, y, n, depth - 1, memo));
    memo.insert((a, b, depth), v);
    v
}

#[test]
fn coprime_shift_over_range() {
    for n in 4..=64 {
        let c = coprime_shift_check(n);
        assert!(c.holds, "n={n}");
        assert_eq!(c.witness, None);
    }
    let c = coprime_shift_check(3);
    assert!(!c.holds);
    assert_eq!(c.witness, Some((1, 1)));
}

#[test]
fn coprime_shift_against_brute_force() {
    for n in 2..=40i64 {
        let mut exists = false;
        for a in 0..n {
            for b in 0..n {
                let g = a.gcd(&b).gcd(&n);
                if g == 1 && (a + 2 * b) % n == 0 && (2 * a + b) % n == 0 {
                    exists = true;
                }
            }
        }
        assert_eq!(coprime_shift_check(n).holds, !exists, "n={n}");
    }
}

#[test]
fn diagonal_criterion_exhaustive() {
    for n in 4..=24 {
        for t in isolated_types(n) {
            assert_eq!(resolvable_search(t), t.k1 == t.k2, "{t:?}");
        }
    }
}

#[test]
fn search_agrees_with_bounded_recursion() {
    for n in 2..=16 {
        let mut memo = HashMap::new();
        for t in isolated_types(n) {
            let depth = (n * n) as usize;
            assert_eq!(resolvable_search(t), clears_within(t.k1, t.k2, n, depth, &mut memo), "{t:?}");
        }
    }
}

#[test]
fn small_orders_can_clear_off_diagonal() {
    assert!(resolvable_search(FixedPointType::new(1, 2, 3).unwrap()));
    assert!(resolvable_search(FixedPointType::new(1, 1, 2).unwrap()));
    assert!(!resolvable_search(FixedPointType::new(1, 2, 4).unwrap()));
    assert!(!resolvable_search(FixedPointType::new(0, 1, 5).unwrap()));
}

#[test]
fn on_curve_points_split_as_expected() {
    for n in 2..=12 {
        for l in 1..n {
            if l.gcd(&n) != 1 {
                continue;
            }
            let o = blowup_transition(FixedPointType::new(0, l, n).unwrap()).unwrap();
            assert_eq!(o.kind, OutcomeKind::TwoPoints);
            let on: Vec<_> = o.children.iter().filter(|c| c.on_fixed_curve).collect();
            let off: Vec<_> = o.children.iter().filter(|c| !c.on_fixed_curve).collect();
            assert_eq!(on.len(), 1);
            assert_eq!((on[0].t.k1, on[0].t.k2), (0, l));
            assert_eq!((off[0].t.k1, off[0].t.k2), (n - l, l));
        }
    }
}

#[test]
fn invalid_types_rejected() {
    assert!(FixedPointType::new(2, 2, 4).is_err());
    assert!(FixedPointType::new(1, 0, 4).is_err());
    assert!(FixedPointType::new(5, 1, 4).is_err());
    assert!(FixedPointType::new(0, 1, 1).is_err());
}

proptest! {
    #[test]
    fn children_stay_primitive(n in 2i64..80, k1 in 0i64..80, k2 in 1i64..80) {
        let (k1, k2) = (k1 % n, k2 % n);
        prop_assume!(k2 != 0);
        if let Ok(t) = FixedPointType::new(k1, k2, n) {
            let o = blowup_transition(t).unwrap();
            if t.is_diagonal() {
                prop_assert!(o.children.is_empty());
            } else {
                prop_assert_eq!(o.children.len(), 2);
                for c in o.children {
                    prop_assert_eq!(c.t.k1.gcd(&c.t.k2).gcd(&n), 1);
                    prop_assert!(c.t.k2 > 0);
                }
            }
        }
    }
}

#[test]
fn transition_examples() {
    let fp = |k1, k2, n| FixedPointType::new(k1, k2, n).unwrap();
    assert_eq!(blowup_transition(fp(1, 1, 5)).unwrap().kind, OutcomeKind::FixedCurve);
    let kids = |t| -> Vec<(i64, i64)> {
        blowup_transition(t).unwrap().children.iter().map(|c| (c.t.k1, c.t.k2)).collect()
    };
    assert_eq!(kids(fp(1, 2, 3)), [(1, 1), (2, 2)]);
    assert_eq!(kids(fp(1, 3, 4)), [(1, 2), (2, 3)]);
    assert!(resolvable_search(fp(3, 3, 7)));
}
