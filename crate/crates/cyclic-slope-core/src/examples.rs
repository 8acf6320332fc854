//! The product example attaining the lower bound, and exhaustive bounded
//! enumeration of fiber germs.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::cluster::{is_standard, residue, validate_germ, ClusterNode, Curve, FiberGerm, HorizontalContact, NodeId};
use crate::fibration::{lambda_lower, ParamError};
use crate::rational::Rational;
use crate::resolution::resolve_germ;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProductExampleParams {
    pub n: i64,
    pub h: i64,
    #[cfg_attr(feature = "serde", serde(rename = "N"))]
    pub big_n: i64,
    #[cfg_attr(feature = "serde", serde(rename = "M"))]
    pub big_m: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProductExample {
    pub g: i64,
    #[cfg_attr(feature = "serde", serde(rename = "Kf2"))]
    pub kf2: Rational,
    pub chif: Rational,
    pub slope: Rational,
    pub lambda: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExampleError {
    #[error("invalid product example parameters: {0}")]
    InvalidParams(&'static str),
    #[error("χ_f = 0, the slope is undefined")]
    DegenerateExample,
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("slope {slope} differs from λ = {lambda}")]
    NotSharp { slope: Rational, lambda: Rational },
}

/// The cyclic cover of `B × Γ` branched along a smooth member of `|n𝔡|`.
#[allow(clippy::result_large_err)]
pub fn product_example(p: ProductExampleParams) -> Result<ProductExample, ExampleError> {
    let ProductExampleParams { n, h, big_n, big_m } = p;
    if n < 2 || h < 0 || big_n < 1 || big_m < 1 {
        return Err(ExampleError::InvalidParams("need n >= 2, h >= 0, N >= 1, M >= 1"));
    }
    let twice = n * (n - 1) * big_m + 2 * n * (h - 1) + 2;
    if twice % 2 != 0 || twice < 4 {
        return Err(ExampleError::InvalidParams("genus must be an integer >= 2"));
    }
    let g = twice / 2;
    let kf2 = Rational::from(2 * n * (n - 1) * big_n * ((n - 1) * big_m + 2 * (h - 1)));
    let chif = Rational::new(n * (n - 1) * big_n * (3 * (h - 1) + (2 * n - 1) * big_m), 6);
    if chif.is_zero() {
        return Err(ExampleError::DegenerateExample);
    }
    let slope = kf2.checked_div(&chif).ok_or(ExampleError::DegenerateExample)?;
    let lambda = lambda_lower(g, h, n)?.lambda;
    if slope != lambda {
        return Err(ExampleError::NotSharp { slope, lambda });
    }
    Ok(ProductExample { g, kf2, chif, slope, lambda })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnumerationBudget {
    pub max_nodes: usize,
    pub max_mult: i64,
    pub max_depth: usize,
}

impl EnumerationBudget {
    pub fn new(max_nodes: usize, max_mult: i64) -> Self {
        EnumerationBudget { max_nodes, max_mult, max_depth: max_nodes }
    }

    pub fn zero() -> Self {
        EnumerationBudget { max_nodes: 0, max_mult: 0, max_depth: 0 }
    }
}

const OPEN: i64 = -1;
const CLOSE: i64 = -2;

/// Position of a node relative to its parent: free on the parent's
/// exceptional curve, or at its meeting point with the parent's first or
/// second host.
fn position_code(g: &FiberGerm, x: &ClusterNode) -> i64 {
    let Some(s) = x.satellite_with else { return 0 };
    let Some(p) = x.parent.and_then(|p| g.node(p)) else { return 0 };
    if Curve::from_host_id(s) == p.primary_host() {
        1
    } else {
        2
    }
}

fn encode(g: &FiberGerm, children: &BTreeMap<Option<NodeId>, Vec<NodeId>>, parent: Option<NodeId>) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = children
        .get(&parent)
        .into_iter()
        .flatten()
        .filter_map(|&id| g.node(id))
        .map(|x| {
            let mut v = alloc::vec![OPEN, x.mult, position_code(g, x)];
            for c in encode(g, children, Some(x.id)) {
                v.extend(c);
            }
            v.push(CLOSE);
            v
        })
        .collect();
    out.sort();
    out
}

fn child_map(g: &FiberGerm) -> BTreeMap<Option<NodeId>, Vec<NodeId>> {
    let mut m: BTreeMap<Option<NodeId>, Vec<NodeId>> = BTreeMap::new();
    for x in &g.nodes {
        m.entry(x.parent).or_default().push(x.id);
    }
    m
}

/// A key identifying a germ up to relabelling of nodes and permutation of
/// siblings.
pub fn canonical_key(g: &FiberGerm) -> Vec<i64> {
    let mut key = alloc::vec![g.n, g.r, i64::from(g.gamma_in_branch)];
    let mut contacts: Vec<i64> = g.horizontal_contacts.iter().map(|h| h.order).collect();
    contacts.sort_unstable();
    key.push(contacts.len() as i64);
    key.extend(contacts);
    for c in encode(g, &child_map(g), None) {
        key.extend(c);
    }
    key
}

/// Relabel nodes `1, 2, …` in canonical depth-first order and renumber
/// horizontal contacts.
pub fn canonicalize(g: &FiberGerm) -> FiberGerm {
    let children = child_map(g);
    fn subtree_key(g: &FiberGerm, children: &BTreeMap<Option<NodeId>, Vec<NodeId>>, id: NodeId) -> Vec<i64> {
        let x = g.node(id).expect("node exists");
        let mut v = alloc::vec![OPEN, x.mult, position_code(g, x)];
        for c in encode(g, children, Some(id)) {
            v.extend(c);
        }
        v.push(CLOSE);
        v
    }
    let mut order = Vec::with_capacity(g.nodes.len());
    let mut stack: Vec<Option<NodeId>> = alloc::vec![None];
    let mut visit: Vec<NodeId> = Vec::new();
    while let Some(p) = stack.pop() {
        let mut kids: Vec<NodeId> = children.get(&p).cloned().unwrap_or_default();
        kids.sort_by_cached_key(|&k| subtree_key(g, &children, k));
        if let Some(id) = p {
            visit.push(id);
        }
        for k in kids.into_iter().rev() {
            stack.push(Some(k));
        }
    }
    order.extend(visit);
    let relabel: BTreeMap<NodeId, NodeId> = order.iter().enumerate().map(|(i, &id)| (id, i as NodeId + 1)).collect();
    let map_host = |s: NodeId| if s == 0 { 0 } else { relabel[&s] };
    let nodes = order
        .iter()
        .filter_map(|&id| g.node(id))
        .map(|x| ClusterNode {
            id: relabel[&x.id],
            parent: x.parent.map(|p| relabel[&p]),
            mult: x.mult,
            satellite_with: x.satellite_with.map(map_host),
        })
        .collect();
    let mut orders: Vec<i64> = g.horizontal_contacts.iter().map(|h| h.order).collect();
    orders.sort_unstable();
    let horizontal_contacts = orders
        .into_iter()
        .enumerate()
        .map(|(i, order)| HorizontalContact { branch: i as u32 + 1, order })
        .collect();
    FiberGerm { n: g.n, r: g.r, gamma_in_branch: g.gamma_in_branch, nodes, horizontal_contacts }
}

/// Multiplicities allowed at a node: `m >= 2`, `m ∈ nZ ∪ nZ+1`,
/// `m <= min(max_mult, r/2 + 1)`.
pub fn allowed_multiplicities(n: i64, r: i64, max_mult: i64) -> Vec<i64> {
    let cap = max_mult.min(r / 2 + 1);
    (2..=cap).filter(|&m| residue(m, n).is_some()).collect()
}

/// Possible (parent, satellite host) positions for a new node.
fn positions(g: &FiberGerm, max_depth: usize) -> Vec<(Option<NodeId>, Option<NodeId>)> {
    let mut out = Vec::new();
    if max_depth >= 1 {
        out.push((None, None));
    }
    let taken: BTreeSet<(NodeId, NodeId)> =
        g.nodes.iter().filter_map(|x| Some((x.parent?, x.satellite_with?))).collect();
    for p in &g.nodes {
        if g.depth(p.id) + 1 > max_depth {
            continue;
        }
        out.push((Some(p.id), None));
        for h in p.hosts() {
            let s = h.host_id();
            if !taken.contains(&(p.id, s)) {
                out.push((Some(p.id), Some(s)));
            }
        }
    }
    out
}

/// Every germ accepted by [`validate_germ`] within the budget, for a fixed
/// choice of whether the fiber lies in the branch curve. Sorted by node
/// count, then canonical key.
pub fn enumerate_germs_with(n: i64, r: i64, budget: EnumerationBudget, gamma_in_branch: bool) -> Vec<FiberGerm> {
    let base = FiberGerm { gamma_in_branch, ..FiberGerm::empty(n, r) };
    if n < 2 || r <= 0 || r % n != 0 {
        return Vec::new();
    }
    let mults = allowed_multiplicities(n, r, budget.max_mult);
    let mut out = alloc::vec![base.clone()];
    let mut level = alloc::vec![base];
    for size in 1..=budget.max_nodes {
        let mut next: BTreeMap<Vec<i64>, FiberGerm> = BTreeMap::new();
        for g in &level {
            let new_id = size as NodeId;
            for (parent, sat) in positions(g, budget.max_depth) {
                for &m in &mults {
                    let mut h = g.clone();
                    h.nodes.push(ClusterNode { id: new_id, parent, mult: m, satellite_with: sat });
                    if !validate_germ(&h).is_empty() {
                        continue;
                    }
                    let h = canonicalize(&h);
                    next.entry(canonical_key(&h)).or_insert(h);
                }
            }
        }
        level = next.into_values().collect();
        if level.is_empty() {
            break;
        }
        out.extend(level.iter().cloned());
    }
    out
}

/// Every valid germ within the budget with the fiber not in the branch
/// curve, in deterministic order.
pub fn enumerate_germs(n: i64, r: i64, budget: EnumerationBudget) -> Vec<FiberGerm> {
    enumerate_germs_with(n, r, budget, false)
}

/// Germs that describe a complete resolution of the branch curve: both
/// choices for the fiber, and when the fiber is not in the branch curve,
/// additionally one horizontal contact of each order `2..=max_contact_order`
/// that fits.
pub fn enumerate_resolvable(n: i64, r: i64, budget: EnumerationBudget, max_contact_order: i64) -> Vec<FiberGerm> {
    let mut out = Vec::new();
    for gamma in [false, true] {
        for g in enumerate_germs_with(n, r, budget, gamma) {
            let Ok(rg) = resolve_germ(&g) else { continue };
            if !gamma {
                let h = rg.entry(Curve::Fiber).map_or(0, |e| e.horizontal_intersection);
                for k in 2..=max_contact_order.min(h) {
                    let mut c = g.clone();
                    c.horizontal_contacts.push(HorizontalContact { branch: 1, order: k });
                    if resolve_germ(&c).is_ok() {
                        out.push(c);
                    }
                }
            }
            out.push(g);
        }
    }
    out
}

/// Resolvable germs that also respect the standard multiplicity bound.
pub fn enumerate_standard(n: i64, r: i64, budget: EnumerationBudget, max_contact_order: i64) -> Vec<FiberGerm> {
    enumerate_resolvable(n, r, budget, max_contact_order).into_iter().filter(is_standard).collect()
}
