mod common;

use std::collections::BTreeMap;

use cyclic_slope_core::cluster::{ClusterNode, Curve, FiberGerm, HorizontalContact};
use cyclic_slope_core::resolution::{
    check_jp_bounds, euler_local, host_reports, jp_bounds, resolve_germ, vertical_ledger,
    ResolutionError,
};

fn germ(n: i64, r: i64, nodes: Vec<ClusterNode>) -> FiberGerm {
    FiberGerm::with_nodes(n, r, nodes)
}

fn triple_point() -> FiberGerm {
    germ(
        2,
        6,
        vec![
            ClusterNode::root(1, 3),
            ClusterNode::child(2, 1, 2),
            ClusterNode::child(3, 1, 2),
            ClusterNode::child(4, 1, 2),
        ],
    )
}

#[test]
fn double_point_anchor() {
    let rg = resolve_germ(&germ(2, 6, vec![ClusterNode::root(1, 2)])).unwrap();
    assert_eq!(rg.alpha, BTreeMap::from([(1, 1)]));
    assert_eq!((rg.alpha0, rg.eps), (0, 0));
    assert_eq!(euler_local(&rg).unwrap(), 2);
}

#[test]
fn triple_point_anchor() {
    let g = triple_point();
    let rg = resolve_germ(&g).unwrap();
    assert_eq!(rg.alpha, BTreeMap::from([(1, 4)]));
    assert_eq!(rg.alpha0_plus, 0);
    assert_eq!(rg.alpha0, -2);
    assert_eq!(rg.eps, 0);
    assert_eq!(rg.j, BTreeMap::from([(2, 1)]));
    assert_eq!(euler_local(&rg).unwrap(), 6);
    assert_eq!(rg.entry(Curve::Exceptional(1)).unwrap().self_intersection, -4);
    let reports = host_reports(&g, &rg).unwrap();
    let e1 = reports.iter().find(|h| h.curve == Curve::Exceptional(1)).unwrap();
    assert_eq!((e1.tc.t, e1.tc.c, e1.tc.sum_m), (3, 3, 6));
    assert!(reports.iter().all(|h| h.ok()));
}

#[test]
fn fiber_in_branch_family() {
    let mut g = germ(2, 6, vec![ClusterNode::root(1, 4), ClusterNode::root(2, 4)]);
    g.gamma_in_branch = true;
    let rg = resolve_germ(&g).unwrap();
    assert_eq!(rg.j, BTreeMap::from([(1, 1)]));
    assert_eq!(rg.eps, 1);
    assert_eq!(euler_local(&rg).unwrap(), 1);
    let vl = vertical_ledger(&g, &rg);
    let gamma = vl.entries.iter().find(|e| e.curve == Curve::Fiber).unwrap();
    assert_eq!((gamma.self_intersection, gamma.in_branch), (-2, true));
    assert_eq!(vl.families.len(), 1);
    assert_eq!(vl.families[0].j, BTreeMap::from([(1, 1)]));
}

#[test]
fn empty_germ_is_smooth() {
    let rg = resolve_germ(&FiberGerm::empty(3, 6)).unwrap();
    assert_eq!((rg.alpha0, rg.alpha_sum(), rg.eps), (0, 0, 0));
    assert_eq!(euler_local(&rg).unwrap(), 0);
}

#[test]
fn contact_lowers_ramification() {
    let mut g = FiberGerm::empty(2, 6);
    g.horizontal_contacts.push(HorizontalContact { branch: 1, order: 2 });
    let rg = resolve_germ(&g).unwrap();
    assert_eq!(rg.alpha0, 1);
    assert_eq!(euler_local(&rg).unwrap(), 1);
}

#[test]
fn incomplete_germs_rejected() {
    let g = germ(2, 6, vec![ClusterNode::root(1, 3)]);
    assert!(matches!(resolve_germ(&g), Err(ResolutionError::Unresolved { .. })));
    let g = germ(3, 6, vec![ClusterNode::root(1, 5)]);
    assert!(matches!(resolve_germ(&g), Err(ResolutionError::Invalid(_))));
}

#[test]
fn sweep_identities() {
    let germs = common::sweep_germs();
    assert!(germs.len() > 1000, "{}", germs.len());
    for g in &germs {
        let rg = resolve_germ(g).unwrap();
        let (n, a0, eps) = (rg.n, rg.alpha0, rg.eps);
        let expected = (n - 1) * a0 + n * rg.alpha_sum() - (2 * n - 1) * eps;
        let e = euler_local(&rg).unwrap();
        assert_eq!(e, expected, "{g:?}");
        assert!(e >= 0, "{g:?}");
        let jp = jp_bounds(&rg);
        assert!(jp.iota_identity && jp.ramification && jp.singular_points, "{g:?} {jp:?}");
        assert!(check_jp_bounds(&rg));
        for h in host_reports(g, &rg).unwrap() {
            assert!(h.ok(), "{g:?} {h:?}");
        }
    }
}
