//! Clusters of infinitely near singular points of the branch curve over one
//! fiber, the mod-`n` multiplicity rules, multiplicity sequences along a host
//! curve, and elementary transformations.
//!
//! A node sits on its parent's exceptional curve, or on the fiber `Γ_p` when
//! it has no parent. A satellite node additionally lies on a second host;
//! `satellite_with = 0` names the fiber itself.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

/// Identifier of a cluster node; `0` is reserved for the fiber `Γ_p`.
pub type NodeId = u32;

/// Host id naming the fiber `Γ_p`.
pub const FIBER: NodeId = 0;

/// A curve in the fiber: the fiber itself or the exceptional curve of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Curve {
    Fiber,
    Exceptional(NodeId),
}

impl Curve {
    pub fn from_host_id(id: NodeId) -> Curve {
        if id == FIBER {
            Curve::Fiber
        } else {
            Curve::Exceptional(id)
        }
    }

    pub fn host_id(self) -> NodeId {
        match self {
            Curve::Fiber => FIBER,
            Curve::Exceptional(i) => i,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClusterNode {
    pub id: NodeId,
    pub parent: Option<NodeId>,
    pub mult: i64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub satellite_with: Option<NodeId>,
}

impl ClusterNode {
    pub fn root(id: NodeId, mult: i64) -> Self {
        ClusterNode { id, parent: None, mult, satellite_with: None }
    }

    pub fn child(id: NodeId, parent: NodeId, mult: i64) -> Self {
        ClusterNode { id, parent: Some(parent), mult, satellite_with: None }
    }

    pub fn satellite(id: NodeId, parent: NodeId, with: NodeId, mult: i64) -> Self {
        ClusterNode { id, parent: Some(parent), mult, satellite_with: Some(with) }
    }

    pub fn is_satellite(&self) -> bool {
        self.satellite_with.is_some()
    }

    /// The curve this node lies on first: its parent's exceptional curve or
    /// the fiber.
    pub fn primary_host(&self) -> Curve {
        self.parent.map_or(Curve::Fiber, Curve::Exceptional)
    }

    pub fn hosts(&self) -> Vec<Curve> {
        let mut v = vec![self.primary_host()];
        if let Some(s) = self.satellite_with {
            v.push(Curve::from_host_id(s));
        }
        v
    }
}

/// A horizontal branch meeting `Γ_p` with the given contact order at a point
/// where the branch curve is smooth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HorizontalContact {
    pub branch: u32,
    pub order: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FiberGerm {
    pub n: i64,
    pub r: i64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub gamma_in_branch: bool,
    #[cfg_attr(feature = "serde", serde(default))]
    pub nodes: Vec<ClusterNode>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub horizontal_contacts: Vec<HorizontalContact>,
}

impl FiberGerm {
    pub fn empty(n: i64, r: i64) -> Self {
        FiberGerm { n, r, gamma_in_branch: false, nodes: Vec::new(), horizontal_contacts: Vec::new() }
    }

    pub fn with_nodes(n: i64, r: i64, nodes: Vec<ClusterNode>) -> Self {
        FiberGerm { nodes, ..Self::empty(n, r) }
    }

    pub fn node(&self, id: NodeId) -> Option<&ClusterNode> {
        self.nodes.iter().find(|x| x.id == id)
    }

    /// Whether the curve is a component of the branch divisor after the
    /// blow-ups (fiber: `gamma_in_branch`; exceptional: `m ∈ nZ+1`).
    pub fn curve_in_branch(&self, c: Curve) -> bool {
        match c {
            Curve::Fiber => self.gamma_in_branch,
            Curve::Exceptional(i) => self.node(i).is_some_and(|x| residue(x.mult, self.n) == Some(Residue::PlusOne)),
        }
    }

    /// Node ids in blow-up order: every node after its parent and its
    /// satellite host, ties broken by id. `None` when the forest has a cycle
    /// or a dangling reference.
    pub fn blowup_order(&self) -> Option<Vec<NodeId>> {
        let ids: BTreeSet<NodeId> = self.nodes.iter().map(|x| x.id).collect();
        let mut done: BTreeSet<NodeId> = BTreeSet::new();
        let mut order = Vec::with_capacity(self.nodes.len());
        while order.len() < self.nodes.len() {
            let next = self
                .nodes
                .iter()
                .filter(|x| !done.contains(&x.id))
                .filter(|x| {
                    x.hosts().iter().all(|h| match h {
                        Curve::Fiber => true,
                        Curve::Exceptional(p) => ids.contains(p) && done.contains(p),
                    })
                })
                .map(|x| x.id)
                .min()?;
            done.insert(next);
            order.push(next);
        }
        Some(order)
    }

    /// Nodes lying on curve `c` (as primary or satellite host).
    pub fn nodes_on(&self, c: Curve) -> Vec<&ClusterNode> {
        self.nodes.iter().filter(|x| x.hosts().contains(&c)).collect()
    }

    pub fn depth(&self, id: NodeId) -> usize {
        let mut d = 1;
        let mut cur = self.node(id).and_then(|x| x.parent);
        while let Some(p) = cur {
            d += 1;
            if d > self.nodes.len() + 1 {
                break;
            }
            cur = self.node(p).and_then(|x| x.parent);
        }
        d
    }
}

/// Membership of a multiplicity in `nZ` or `nZ+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Residue {
    /// `m ∈ nZ`
    Zero,
    /// `m ∈ nZ+1`
    PlusOne,
}

/// The residue class of `m` modulo `n`, when it is `0` or `1`.
pub fn residue(m: i64, n: i64) -> Option<Residue> {
    match m.rem_euclid(n) {
        0 => Some(Residue::Zero),
        1 => Some(Residue::PlusOne),
        _ => None,
    }
}

/// `d = ⌊m/n⌋`
pub fn floor_div(m: i64, n: i64) -> i64 {
    m.div_euclid(n)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Violation {
    InvalidOrder { n: i64 },
    InvalidBranchDegree { r: i64, n: i64 },
    ReservedId { node: NodeId },
    DuplicateId { node: NodeId },
    UnknownHost { node: NodeId, host: NodeId },
    CyclicParents { node: NodeId },
    MultiplicityTooSmall { node: NodeId, mult: i64 },
    ModNViolation { node: NodeId, mult: i64, n: i64 },
    RootSatellite { node: NodeId },
    SatelliteNotAdjacent { node: NodeId, host: NodeId },
    SatelliteCollision { node: NodeId, other: NodeId },
    Proximity { curve: Curve, load: i64, capacity: i64 },
    ContactOrder { branch: u32, order: i64 },
    ContactOnBranchFiber { branch: u32 },
}

/// Check the node rules of a germ: structure, the mod-`n` multiplicity rule
/// and proximity. An empty result means the germ is valid.
///
/// Proximity on a curve `C` compares the branch curve minus `C` at the points
/// lying on `C` against the total intersection available on `C`: `m_C` for
/// an exceptional curve, `r` for the fiber.
pub fn validate_germ(g: &FiberGerm) -> Vec<Violation> {
    let mut out = Vec::new();
    if g.n < 2 {
        out.push(Violation::InvalidOrder { n: g.n });
        return out;
    }
    if g.r <= 0 || g.r % g.n != 0 {
        out.push(Violation::InvalidBranchDegree { r: g.r, n: g.n });
    }
    let mut seen = BTreeSet::new();
    for x in &g.nodes {
        if x.id == FIBER {
            out.push(Violation::ReservedId { node: x.id });
        }
        if !seen.insert(x.id) {
            out.push(Violation::DuplicateId { node: x.id });
        }
    }
    for x in &g.nodes {
        for h in x.hosts() {
            if let Curve::Exceptional(p) = h {
                if !seen.contains(&p) {
                    out.push(Violation::UnknownHost { node: x.id, host: p });
                }
            }
        }
        if x.mult < 2 {
            out.push(Violation::MultiplicityTooSmall { node: x.id, mult: x.mult });
        } else if residue(x.mult, g.n).is_none() {
            out.push(Violation::ModNViolation { node: x.id, mult: x.mult, n: g.n });
        }
    }
    if !out.is_empty() {
        return out;
    }
    if g.blowup_order().is_none() {
        let bad = g.nodes.iter().map(|x| x.id).max().unwrap_or(0);
        out.push(Violation::CyclicParents { node: bad });
        return out;
    }
    let mut at_point: BTreeMap<(NodeId, NodeId), NodeId> = BTreeMap::new();
    for x in &g.nodes {
        let Some(s) = x.satellite_with else { continue };
        let Some(p) = x.parent else {
            out.push(Violation::RootSatellite { node: x.id });
            continue;
        };
        let parent_hosts = g.node(p).map(|pn| pn.hosts()).unwrap_or_default();
        if !parent_hosts.contains(&Curve::from_host_id(s)) {
            out.push(Violation::SatelliteNotAdjacent { node: x.id, host: s });
        }
        if let Some(other) = at_point.insert((p, s), x.id) {
            out.push(Violation::SatelliteCollision { node: x.id, other });
        }
    }
    for c in g.nodes.iter().map(|x| Curve::Exceptional(x.id)).chain([Curve::Fiber]) {
        let in_branch = u64::from(g.curve_in_branch(c)) as i64;
        let mut load: i64 = g.nodes_on(c).iter().map(|x| x.mult - in_branch).sum();
        let capacity = match c {
            Curve::Fiber => {
                load += g.horizontal_contacts.iter().map(|h| h.order).sum::<i64>();
                g.r
            }
            Curve::Exceptional(i) => g.node(i).map_or(0, |x| x.mult),
        };
        if load > capacity {
            out.push(Violation::Proximity { curve: c, load, capacity });
        }
    }
    for h in &g.horizontal_contacts {
        if h.order < 1 {
            out.push(Violation::ContactOrder { branch: h.branch, order: h.order });
        }
        if g.gamma_in_branch {
            out.push(Violation::ContactOnBranchFiber { branch: h.branch });
        }
    }
    out
}

/// Whether every multiplicity respects the bound achieved by elementary
/// transformations: the horizontal part has multiplicity at most `r/2` at
/// points of the fiber (at most `r/2` for the whole branch curve when `n = 2`
/// and `r/2` is odd), and no point exceeds `r/2 + 1`.
pub fn is_standard(g: &FiberGerm) -> bool {
    let half = g.r / 2 + (g.r % 2);
    let strict_n2 = g.n == 2 && (g.r / 2) % 2 == 1;
    g.nodes.iter().all(|x| {
        if x.parent.is_none() {
            let horizontal = x.mult - i64::from(g.gamma_in_branch);
            let total_ok = !strict_n2 || x.mult <= g.r / 2;
            horizontal * 2 <= g.r && total_ok
        } else {
            x.mult <= half + 1
        }
    })
}

/// Counts `s_k` of virtual local branches with contact order `k` with the
/// host curve.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BranchProfile {
    pub s: BTreeMap<u32, u32>,
}

impl BranchProfile {
    pub fn new(pairs: &[(u32, u32)]) -> Self {
        let mut s = BTreeMap::new();
        for &(k, c) in pairs {
            if c > 0 {
                *s.entry(k).or_insert(0) += c;
            }
        }
        BranchProfile { s }
    }

    /// Largest `k` with `s_k ≠ 0` (0 for an empty profile).
    pub fn i_max(&self) -> u32 {
        self.s.iter().filter(|(_, &c)| c > 0).map(|(&k, _)| k).max().unwrap_or(0)
    }

    /// `Σ_{k >= from} s_k`
    pub fn tail(&self, from: u32) -> i64 {
        self.s.range(from..).map(|(_, &c)| i64::from(c)).sum()
    }

    /// `Σ k s_k`, the local intersection with the host curve.
    pub fn weighted(&self) -> i64 {
        self.s.iter().map(|(&k, &c)| i64::from(k) * i64::from(c)).sum()
    }

    pub fn get(&self, k: u32) -> i64 {
        self.s.get(&k).map_or(0, |&c| i64::from(c))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MultiplicitySequence {
    pub n: i64,
    pub m: Vec<i64>,
    pub d: Vec<i64>,
    pub types: Vec<Residue>,
    pub i_bm: usize,
    pub i_max: usize,
    /// The branch counts the sequence was generated from.
    pub profile: BranchProfile,
}

impl MultiplicitySequence {
    /// `m_{j}` with 1-based `j`, extended by the terminal value `1`.
    fn m_at(&self, j: usize) -> i64 {
        if j >= 1 && j <= self.m.len() {
            self.m[j - 1]
        } else {
            1
        }
    }

    fn d_at(&self, j: usize) -> i64 {
        floor_div(self.m_at(j), self.n)
    }

    /// `c_i`: how many multiplicities lie in `nZ+1`.
    pub fn plus_one_count(&self) -> usize {
        self.types.iter().filter(|t| **t == Residue::PlusOne).count()
    }

    /// Whether the last step was the extra `n = 2` step `i_bm = i_max + 1`.
    pub fn has_extra_step(&self) -> bool {
        self.i_bm == self.i_max + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClusterError {
    #[error("profile generates multiplicity {mult} at step {step}, outside nZ ∪ nZ+1 (n={n})")]
    InvalidProfile { step: usize, mult: i64, n: i64 },
    #[error("identity violated on host curve: {0}")]
    IdentityViolation(&'static str),
    #[error("elementary transformation precondition violated: {0}")]
    PreconditionViolated(&'static str),
}

/// The multiplicities `m_{i,1}, m_{i,2}, …` at the successive points where a
/// point on the host curve and its infinitely near points meet the host.
///
/// `m_{i,1} = Σ s_k + 1`, and `m_{i,j+1} = Σ_{k > j} s_k + 1` (resp. `+ 2`)
/// when `m_{i,j} ∈ nZ` (resp. `nZ+1`). Generation stops at the first value
/// at most 1, which is not included.
pub fn multiplicity_sequence(p: &BranchProfile, n: i64) -> Result<MultiplicitySequence, ClusterError> {
    let mut m = Vec::new();
    let mut types = Vec::new();
    let mut cur = p.tail(1) + 1;
    let mut j: u32 = 1;
    while cur > 1 {
        let t = residue(cur, n).ok_or(ClusterError::InvalidProfile { step: j as usize, mult: cur, n })?;
        m.push(cur);
        types.push(t);
        cur = p.tail(j + 1) + 1 + i64::from(t == Residue::PlusOne);
        j += 1;
    }
    let d = m.iter().map(|&x| floor_div(x, n)).collect();
    let i_bm = m.len();
    Ok(MultiplicitySequence { n, m, d, types, i_bm, i_max: p.i_max() as usize, profile: p.clone() })
}

/// Recover the branch counts from an observed chain of multiplicities along
/// a host curve, inverting the generation rule. `None` when some count would
/// be negative or a multiplicity breaks the mod-`n` rule.
pub fn profile_from_chain(m: &[i64], n: i64) -> Option<BranchProfile> {
    let mut types = Vec::with_capacity(m.len());
    for &x in m {
        types.push(residue(x, n)?);
    }
    let a = |j: usize| -> i64 {
        if j == 0 || j > m.len() {
            return 0;
        }
        let prev_plus = j >= 2 && types[j - 2] == Residue::PlusOne;
        m[j - 1] - 1 - i64::from(prev_plus)
    };
    let mut pairs = Vec::new();
    for j in 1..=m.len() {
        let s = a(j) - a(j + 1);
        if s < 0 {
            return None;
        }
        pairs.push((j as u32, s as u32));
    }
    Some(BranchProfile::new(&pairs))
}

/// The kind of curve hosting a cluster of points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum HostKind {
    /// An exceptional curve, blown up `an - 1` times to become a `(-an)`-curve.
    Exceptional,
    /// The fiber `Γ_p`, blown up `an` times.
    Fiber,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TcReport {
    pub t: i64,
    pub c: i64,
    pub sum_ci: i64,
    pub sum_m: i64,
    pub sum_d: i64,
    /// `a` with the host becoming a `(-an)`-curve, if `c` has the right shape.
    pub a: Option<i64>,
    pub ok: bool,
    pub sequences: Vec<MultiplicitySequence>,
}

/// Compute `t = Σ k s_{i,k}`, `c = Σ i_bm`, `Σ c_i` for the points on a host
/// curve and check `t + c + Σ c_i = Σ m_{i,j}` and `(t + c)/n = Σ d_{i,j}`.
pub fn check_tc_identities(host: HostKind, n: i64, profiles: &[BranchProfile]) -> Result<TcReport, ClusterError> {
    let sequences = profiles
        .iter()
        .map(|p| multiplicity_sequence(p, n))
        .collect::<Result<Vec<_>, _>>()?;
    let t: i64 = profiles.iter().map(BranchProfile::weighted).sum();
    let c: i64 = sequences.iter().map(|s| s.i_bm as i64).sum();
    let sum_ci: i64 = sequences.iter().map(|s| s.plus_one_count() as i64).sum();
    let sum_m: i64 = sequences.iter().flat_map(|s| s.m.iter()).sum();
    let sum_d: i64 = sequences.iter().flat_map(|s| s.d.iter()).sum();
    let first = t + c + sum_ci == sum_m;
    let second = (t + c) % n == 0 && (t + c) / n == sum_d;
    let blowups = match host {
        HostKind::Exceptional => c + 1,
        HostKind::Fiber => c,
    };
    let a = (blowups > 0 && blowups % n == 0).then_some(blowups / n);
    if !first {
        return Err(ClusterError::IdentityViolation("t + c + Σc_i ≠ Σm"));
    }
    if !second {
        return Err(ClusterError::IdentityViolation("(t + c)/n ≠ Σd"));
    }
    Ok(TcReport { t, c, sum_ci, sum_m, sum_d, a, ok: true, sequences })
}

/// Check the monotonicity properties of a multiplicity sequence:
///
/// 1. for `n >= 3`, `m_j >= m_{j+1}`, with equality exactly when `s_j = 0`
///    (`m_j ∈ nZ`) or `s_j = 1` (`m_j ∈ nZ+1`); for `n = 2`,
///    `m_j + 1 >= m_{j+1}`, with equality only for an odd-to-even step;
/// 2. after a step from `nZ+1` into `nZ` the next step strictly decreases;
/// 3. `d_j - d_{j+1} >= n - 3` whenever `m_j ∈ nZ+1`.
pub fn check_monotonicity(seq: &MultiplicitySequence, n: i64) -> bool {
    let len = seq.m.len();
    for j in 1..=len {
        let (mj, mn) = (seq.m_at(j), seq.m_at(j + 1));
        let tj = seq.types[j - 1];
        let sj = seq.profile.get(j as u32);
        if n >= 3 {
            if mj < mn {
                return false;
            }
            let eq_expected = match tj {
                Residue::Zero => sj == 0,
                Residue::PlusOne => sj == 1,
            };
            if (mj == mn) != eq_expected {
                return false;
            }
        } else {
            if mj + 1 < mn {
                return false;
            }
            if mj + 1 == mn && !(mj % 2 == 1 && mn % 2 == 0) {
                return false;
            }
        }
        if j >= 2 && seq.types[j - 2] == Residue::PlusOne && tj == Residue::Zero && mj <= mn {
            return false;
        }
        if tj == Residue::PlusOne && seq.d_at(j) - seq.d_at(j + 1) < n - 3 {
            return false;
        }
    }
    true
}

/// Multiplicity data after one elementary transformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TransformStep {
    pub d_prime: i64,
    pub m_prime: i64,
}

/// Elementary transformation at a point of multiplicity `m > r/2`:
/// `⌊m'/n⌋ = r/n - ⌊m/n⌋`. The new multiplicity is `n⌊m'/n⌋`, plus one when
/// the transformed fiber lies in the branch curve.
pub fn elementary_transform_step(m: i64, r: i64, n: i64, fiber_in_branch: bool) -> Result<TransformStep, ClusterError> {
    if n < 2 || r <= 0 || r % n != 0 {
        return Err(ClusterError::PreconditionViolated("r must be a positive multiple of n"));
    }
    if residue(m, n).is_none() {
        return Err(ClusterError::PreconditionViolated("m must lie in nZ ∪ nZ+1"));
    }
    if 2 * m <= r {
        return Err(ClusterError::PreconditionViolated("m must exceed r/2"));
    }
    let d = floor_div(m, n);
    let d_prime = r / n - d;
    if !(2 * n * d_prime <= r && r <= 2 * n * d) {
        return Err(ClusterError::IdentityViolation("⌊m'/n⌋ ≤ r/2n ≤ ⌊m/n⌋ fails"));
    }
    Ok(TransformStep { d_prime, m_prime: n * d_prime + i64::from(fiber_in_branch) })
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Standardized {
    pub m: Vec<i64>,
    pub d: Vec<i64>,
    pub steps: usize,
}

/// A point needs transforming when `m > r/2`, except for the fixed point
/// `m = r/2 + 1 ∈ nZ+1` whose fiber lies in the branch curve.
fn offending(m: i64, r: i64, n: i64) -> bool {
    2 * m > r && !(2 * m == r + 2 && residue(m, n) == Some(Residue::PlusOne))
}

/// Apply elementary transformations to the points of one fiber until every
/// multiplicity respects the standard bound.
pub fn standardize(ms: &[i64], r: i64, n: i64) -> Result<Standardized, ClusterError> {
    let mut m = ms.to_vec();
    let mut steps = 0;
    while let Some(i) = (0..m.len()).filter(|&i| offending(m[i], r, n)).max_by_key(|&i| m[i]) {
        let before = floor_div(m[i], n);
        let st = elementary_transform_step(m[i], r, n, false)?;
        if st.d_prime >= before && st.m_prime >= m[i] {
            return Err(ClusterError::IdentityViolation("elementary transformation did not decrease"));
        }
        m[i] = st.m_prime;
        steps += 1;
    }
    let d = m.iter().map(|&x| floor_div(x, n)).collect();
    Ok(Standardized { m, d, steps })
}
