use cyclic_slope_core::cluster::{
    check_monotonicity, check_tc_identities, elementary_transform_step, floor_div,
    multiplicity_sequence, profile_from_chain, residue, standardize, validate_germ,
    BranchProfile, ClusterError, ClusterNode, FiberGerm, HostKind, Residue, Violation,
};
use proptest::prelude::*;

fn profile(pairs: &[(u32, u32)]) -> BranchProfile {
    BranchProfile::new(pairs)
}

fn profile_strategy() -> impl Strategy<Value = BranchProfile> {
    proptest::collection::btree_map(1u32..7, 0u32..6, 0..5)
        .prop_map(|s| BranchProfile::new(&s.into_iter().collect::<Vec<_>>()))
}

#[test]
fn sequence_examples() {
    let s = multiplicity_sequence(&profile(&[(1, 2), (2, 1)]), 3).unwrap();
    assert_eq!(s.m, vec![4, 3]);
    assert_eq!(s.d, vec![1, 1]);
    assert_eq!(s.types, vec![Residue::PlusOne, Residue::Zero]);
    assert!(check_monotonicity(&s, 3));

    let s = multiplicity_sequence(&profile(&[(1, 2)]), 2).unwrap();
    assert_eq!(s.m, vec![3, 2]);
    assert_eq!(s.i_bm, 2);
    assert!(s.has_extra_step());
    assert!(check_monotonicity(&s, 2));

    let s = multiplicity_sequence(&profile(&[(1, 1)]), 2).unwrap();
    assert_eq!(s.m, vec![2]);
    assert_eq!(s.i_bm, 1);
    assert!(!s.has_extra_step());

    let s = multiplicity_sequence(&profile(&[(2, 4)]), 5).unwrap();
    assert_eq!(s.m, vec![5, 5]);
    assert!(check_monotonicity(&s, 5));
}

#[test]
fn invalid_profile_rejected() {
    let e = multiplicity_sequence(&profile(&[(1, 2)]), 4).unwrap_err();
    assert_eq!(e, ClusterError::InvalidProfile { step: 1, mult: 3, n: 4 });
}

#[test]
fn tc_examples() {
    let r = check_tc_identities(HostKind::Exceptional, 2, &vec![profile(&[(1, 1)]); 3]).unwrap();
    assert_eq!((r.t, r.c, r.sum_ci, r.sum_m), (3, 3, 0, 6));
    assert_eq!(r.a, Some(2));

    let r = check_tc_identities(HostKind::Exceptional, 2, &[profile(&[(1, 1)])]).unwrap();
    assert_eq!((r.t, r.c, r.sum_m), (1, 1, 2));

    let p = profile(&[(1, 1), (2, 1)]);
    let r = check_tc_identities(HostKind::Fiber, 2, &[p.clone(), p]).unwrap();
    assert_eq!((r.t, r.c, r.sum_ci, r.sum_m, r.sum_d), (6, 6, 4, 16, 6));
    assert_eq!(r.sequences[0].m, vec![3, 3, 2]);
    assert_eq!(r.a, Some(3));
}

#[test]
fn monotonicity_flags_profiles_outside_its_range() {
    let s = multiplicity_sequence(&profile(&[(1, 1), (3, 1), (4, 4)]), 3).unwrap();
    assert_eq!(s.m, vec![7, 7, 7, 6]);
    assert!(!check_monotonicity(&s, 3));
}

#[test]
fn monotonicity_rejects_bad_sequences() {
    let mut s = multiplicity_sequence(&profile(&[(1, 2), (2, 1)]), 3).unwrap();
    s.m = vec![3, 4];
    s.d = vec![1, 1];
    s.types = vec![Residue::Zero, Residue::PlusOne];
    assert!(!check_monotonicity(&s, 3));
}

#[test]
fn transform_examples() {
    assert_eq!(elementary_transform_step(4, 6, 2, false).unwrap().d_prime, 1);
    assert_eq!(elementary_transform_step(4, 6, 3, false).unwrap().d_prime, 1);
    for n in 2..=6 {
        for k in 1..=6 {
            let r = k * n;
            assert_eq!(elementary_transform_step(r, r, n, false).unwrap().d_prime, 0);
        }
    }
    let st = elementary_transform_step(4, 6, 2, true).unwrap();
    assert_eq!(st.m_prime, 3);
    assert!(matches!(
        elementary_transform_step(3, 6, 2, false),
        Err(ClusterError::PreconditionViolated(_))
    ));
    assert!(matches!(
        elementary_transform_step(5, 6, 3, false),
        Err(ClusterError::PreconditionViolated(_))
    ));
    assert!(matches!(
        elementary_transform_step(4, 7, 2, false),
        Err(ClusterError::PreconditionViolated(_))
    ));
}

#[test]
fn transform_bound_on_every_admissible_point() {
    for n in 2..=8i64 {
        for k in 1..=10i64 {
            let r = k * n;
            for m in 2..=r {
                if residue(m, n).is_none() || 2 * m <= r {
                    continue;
                }
                let st = elementary_transform_step(m, r, n, false).unwrap();
                assert!(2 * n * st.d_prime <= r && r <= 2 * n * floor_div(m, n));
                assert!(st.m_prime < m || st.d_prime < floor_div(m, n));
            }
        }
    }
}

#[test]
fn standardize_examples() {
    let s = standardize(&[6], 6, 2).unwrap();
    assert_eq!((s.d.clone(), s.steps), (vec![0], 1));
    let s = standardize(&[4], 6, 2).unwrap();
    assert_eq!((s.d.clone(), s.steps), (vec![1], 1));
    assert!(s.m[0] <= 4);
    let s = standardize(&[], 6, 2).unwrap();
    assert!(s.m.is_empty());
    assert_eq!(s.steps, 0);
    let s = standardize(&[3, 2], 6, 2).unwrap();
    assert_eq!(s.steps, 0);
}

#[test]
fn validation_examples() {
    let mut nodes = vec![ClusterNode::root(1, 3)];
    nodes.extend((2..=4).map(|i| ClusterNode::child(i, 1, 2)));
    assert!(validate_germ(&FiberGerm::with_nodes(2, 6, nodes)).is_empty());

    let bad = FiberGerm::with_nodes(3, 6, vec![ClusterNode::root(1, 5)]);
    assert!(validate_germ(&bad).contains(&Violation::ModNViolation { node: 1, mult: 5, n: 3 }));

    let bad = FiberGerm::with_nodes(2, 6, vec![ClusterNode::root(1, 1)]);
    assert!(matches!(validate_germ(&bad)[..], [Violation::MultiplicityTooSmall { .. }, ..]));

    let dup = FiberGerm::with_nodes(2, 6, vec![ClusterNode::root(1, 2), ClusterNode::root(1, 2)]);
    assert!(validate_germ(&dup).contains(&Violation::DuplicateId { node: 1 }));

    let over = FiberGerm::with_nodes(2, 6, vec![ClusterNode::root(1, 4), ClusterNode::root(2, 4)]);
    assert!(validate_germ(&over).iter().any(|v| matches!(v, Violation::Proximity { .. })));
}

proptest! {
    #[test]
    fn sequence_shape(p in profile_strategy(), n in 2i64..7) {
        if let Ok(s) = multiplicity_sequence(&p, n) {
            let total: i64 = p.s.values().map(|&c| i64::from(c)).sum();
            if total == 0 {
                prop_assert!(s.m.is_empty());
            } else {
                prop_assert_eq!(s.m[0], total + 1);
                prop_assert_eq!(s.m.last().unwrap() % n, 0);
            }
            for j in 0..s.m.len() {
                let next = s.m.get(j + 1).copied().unwrap_or(1);
                let prev_plus = j >= 1 && s.types[j - 1] == Residue::PlusOne;
                let cur_plus = s.types[j] == Residue::PlusOne;
                let sj = p.get(j as u32 + 1);
                prop_assert_eq!(s.m[j] - next, sj + i64::from(prev_plus) - i64::from(cur_plus));
            }
            if n >= 3 {
                prop_assert_eq!(s.i_bm, s.i_max);
            } else {
                prop_assert!(s.i_bm == s.i_max || s.has_extra_step());
            }
            let back = profile_from_chain(&s.m, n).unwrap();
            prop_assert_eq!(multiplicity_sequence(&back, n).unwrap().m, s.m.clone());
            prop_assert_eq!(back.weighted(), p.weighted());
        }
    }

    #[test]
    fn tc_identities_hold(ps in proptest::collection::vec(profile_strategy(), 0..4), n in 2i64..7) {
        let ps: Vec<_> = ps.into_iter().filter(|p| multiplicity_sequence(p, n).is_ok()).collect();
        for host in [HostKind::Exceptional, HostKind::Fiber] {
            let r = check_tc_identities(host, n, &ps).unwrap();
            prop_assert_eq!(r.t + r.c + r.sum_ci, r.sum_m);
            prop_assert_eq!(r.t + r.c, n * r.sum_d);
        }
    }

    #[test]
    fn standardize_terminates(n in 2i64..7, k in 1i64..8, raw in proptest::collection::vec(0i64..60, 0..6)) {
        let r = k * n;
        let ms: Vec<i64> = raw
            .into_iter()
            .map(|x| 2 + x % (r - 1).max(1))
            .filter(|&m| m <= r && residue(m, n).is_some())
            .collect();
        let st = standardize(&ms, r, n).unwrap();
        prop_assert!(st.steps <= ms.len());
        for &m in &st.m {
            prop_assert!(2 * m <= r + 2);
        }
    }
}
