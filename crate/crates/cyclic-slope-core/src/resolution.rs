//! Blow-up tower over a fiber germ.
//!
//! Every node of the germ is blown up in order. The ledger tracks, for the
//! fiber and each exceptional curve, its self-intersection, its coefficient in
//! the total transform of the fiber, whether it lies in the branch divisor,
//! and the intersection number with the transformed branch divisor
//! `R_i = ψ_i^* R_{i-1} - n⌊m_i/n⌋ E_i`. Singularity indices and an
//! independent topological Euler number are read off the final ledger.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::cluster::{
    check_monotonicity, check_tc_identities, floor_div, profile_from_chain, residue, validate_germ, ClusterError,
    Curve, FiberGerm, HostKind, MultiplicitySequence, NodeId, Residue, TcReport, Violation,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResolutionError {
    #[error("germ fails validation: {0:?}")]
    Invalid(Vec<Violation>),
    #[error("germ does not resolve the branch divisor at {curve:?}: {reason}")]
    Unresolved { curve: Curve, reason: &'static str },
    #[error("ledger incomplete: {0}")]
    LedgerIncomplete(&'static str),
    #[error("identity violated: {0}")]
    IdentityViolation(&'static str),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CurveLedgerEntry {
    pub curve: Curve,
    pub self_intersection: i64,
    pub in_branch: bool,
    pub fiber_multiplicity: i64,
    /// `R̃·C`
    pub branch_intersection: i64,
    /// `R̃_h·C`, counted with contact order.
    pub horizontal_intersection: i64,
    /// Number of distinct points of `R̃_h ∩ C`.
    pub horizontal_points: i64,
    pub intersections: Vec<(Curve, i64)>,
}

/// The indices entering the per-fiber formulas.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GermIndices {
    pub alpha0: i64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub alpha: BTreeMap<i64, i64>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub eps: i64,
}

impl GermIndices {
    pub fn alpha_sum(&self) -> i64 {
        self.alpha.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResolvedGerm {
    pub n: i64,
    pub r: i64,
    pub alpha: BTreeMap<i64, i64>,
    pub alpha0_plus: i64,
    pub alpha0: i64,
    pub eps: i64,
    pub j: BTreeMap<i64, i64>,
    pub eta: i64,
    pub iota: i64,
    pub kappa: i64,
    pub ledger: Vec<CurveLedgerEntry>,
}

impl ResolvedGerm {
    pub fn indices(&self) -> GermIndices {
        GermIndices { alpha0: self.alpha0, alpha: self.alpha.clone(), eps: self.eps }
    }

    pub fn j_total(&self) -> i64 {
        self.j.values().sum()
    }

    pub fn alpha_sum(&self) -> i64 {
        self.alpha.values().sum()
    }

    pub fn entry(&self, c: Curve) -> Option<&CurveLedgerEntry> {
        self.ledger.iter().find(|e| e.curve == c)
    }

    /// `(n-1)α_0 + nΣα_k - (2n-1)ε`
    pub fn euler_by_indices(&self) -> i64 {
        let n = self.n;
        (n - 1) * self.alpha0 + n * self.alpha_sum() - (2 * n - 1) * self.eps
    }
}

fn edge(a: Curve, b: Curve) -> (Curve, Curve) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

struct Tower {
    self_int: BTreeMap<Curve, i64>,
    fiber_mult: BTreeMap<Curve, i64>,
    rdot: BTreeMap<Curve, i64>,
    in_branch: BTreeMap<Curve, bool>,
    edges: BTreeSet<(Curve, Curve)>,
}

impl Tower {
    fn neighbours(&self, c: Curve) -> Vec<Curve> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| if a == c { Some(b) } else if b == c { Some(a) } else { None })
            .collect()
    }
}

fn blow_up(g: &FiberGerm) -> Result<Tower, ResolutionError> {
    let order = g.blowup_order().ok_or(ResolutionError::LedgerIncomplete("no blow-up order"))?;
    let mut t = Tower {
        self_int: BTreeMap::from([(Curve::Fiber, 0)]),
        fiber_mult: BTreeMap::from([(Curve::Fiber, 1)]),
        rdot: BTreeMap::from([(Curve::Fiber, g.r)]),
        in_branch: BTreeMap::from([(Curve::Fiber, g.gamma_in_branch)]),
        edges: BTreeSet::new(),
    };
    for id in order {
        let x = g.node(id).ok_or(ResolutionError::LedgerIncomplete("missing node"))?;
        let e = Curve::Exceptional(id);
        let d = floor_div(x.mult, g.n);
        let hosts = x.hosts();
        if let [h1, h2] = hosts[..] {
            if !t.edges.remove(&edge(h1, h2)) {
                return Err(ResolutionError::LedgerIncomplete("satellite hosts do not meet"));
            }
        }
        let mut mult = 0;
        for &h in &hosts {
            *t.self_int.get_mut(&h).ok_or(ResolutionError::LedgerIncomplete("unknown host"))? -= 1;
            *t.rdot.get_mut(&h).ok_or(ResolutionError::LedgerIncomplete("unknown host"))? -= g.n * d;
            mult += t.fiber_mult[&h];
            t.edges.insert(edge(e, h));
        }
        t.self_int.insert(e, -1);
        t.fiber_mult.insert(e, mult);
        t.rdot.insert(e, g.n * d);
        t.in_branch.insert(e, residue(x.mult, g.n) == Some(Residue::PlusOne));
    }
    Ok(t)
}

/// Union-find root with path halving.
fn find(parent: &mut BTreeMap<Curve, Curve>, mut c: Curve) -> Curve {
    while parent[&c] != c {
        let up = parent[&parent[&c]];
        parent.insert(c, up);
        c = up;
    }
    c
}

/// The families of vertical branch curves: a branch exceptional curve joins
/// the family of every branch curve its center lies on.
fn families(g: &FiberGerm, branch: &[Curve]) -> Vec<Vec<Curve>> {
    let mut parent: BTreeMap<Curve, Curve> = branch.iter().map(|&c| (c, c)).collect();
    for x in &g.nodes {
        let e = Curve::Exceptional(x.id);
        if !parent.contains_key(&e) {
            continue;
        }
        for h in x.hosts() {
            if parent.contains_key(&h) {
                let (a, b) = (find(&mut parent, e), find(&mut parent, h));
                if a != b {
                    parent.insert(a.max(b), a.min(b));
                }
            }
        }
    }
    let mut groups: BTreeMap<Curve, Vec<Curve>> = BTreeMap::new();
    for &c in branch {
        let root = find(&mut parent, c);
        groups.entry(root).or_default().push(c);
    }
    groups.into_values().collect()
}

/// Resolve a germ and extract all singularity indices.
///
/// The germ must describe a complete resolution: afterwards every branch
/// curve `L` satisfies `R̃·L = L²` and meets no other branch curve, and the
/// horizontal part meets every other curve nonnegatively.
pub fn resolve_germ(g: &FiberGerm) -> Result<ResolvedGerm, ResolutionError> {
    let v = validate_germ(g);
    if !v.is_empty() {
        return Err(ResolutionError::Invalid(v));
    }
    let n = g.n;
    let t = blow_up(g)?;
    let contact_excess: i64 = g.horizontal_contacts.iter().map(|h| h.order - 1).sum();
    let contact_total: i64 = g.horizontal_contacts.iter().map(|h| h.order).sum();

    let mut ledger = Vec::with_capacity(t.self_int.len());
    for (&c, &self_intersection) in &t.self_int {
        let in_branch = t.in_branch[&c];
        let nb = t.neighbours(c);
        let adj_branch = nb.iter().filter(|b| t.in_branch[b]).count() as i64;
        let rdot = t.rdot[&c];
        let (horizontal_intersection, horizontal_points) = if in_branch {
            if rdot != self_intersection {
                return Err(ResolutionError::Unresolved { curve: c, reason: "branch curve still meets the rest of R" });
            }
            if adj_branch > 0 {
                return Err(ResolutionError::Unresolved { curve: c, reason: "two branch curves meet" });
            }
            (0, 0)
        } else {
            let h = rdot - adj_branch;
            if h < 0 {
                return Err(ResolutionError::Unresolved { curve: c, reason: "negative horizontal intersection" });
            }
            if c == Curve::Fiber {
                if contact_total > h {
                    return Err(ResolutionError::Unresolved { curve: c, reason: "contacts exceed the horizontal intersection" });
                }
                (h, h - contact_excess)
            } else {
                (h, h)
            }
        };
        ledger.push(CurveLedgerEntry {
            curve: c,
            self_intersection,
            in_branch,
            fiber_multiplicity: t.fiber_mult[&c],
            branch_intersection: rdot,
            horizontal_intersection,
            horizontal_points,
            intersections: nb.into_iter().map(|o| (o, 1)).collect(),
        });
    }

    let weighted: i64 = ledger.iter().map(|e| e.fiber_multiplicity * e.horizontal_intersection).sum();
    if weighted != g.r {
        return Err(ResolutionError::IdentityViolation("R̃_h·ψ*Γ differs from r"));
    }
    let points: i64 = ledger.iter().map(|e| e.horizontal_points).sum();
    let alpha0_plus = g.r - points;

    let mut j: BTreeMap<i64, i64> = BTreeMap::new();
    let branch: Vec<Curve> = ledger.iter().filter(|e| e.in_branch).map(|e| e.curve).collect();
    for e in ledger.iter().filter(|e| e.in_branch) {
        if e.self_intersection >= 0 || e.self_intersection % n != 0 {
            return Err(ResolutionError::IdentityViolation("vertical branch curve is not a (-an)-curve"));
        }
        *j.entry(-e.self_intersection / n).or_insert(0) += 1;
    }
    let eps = j.get(&1).copied().unwrap_or(0);
    let alpha0 = alpha0_plus - 2 * j.range(2..).map(|(_, &c)| c).sum::<i64>();

    let mut alpha: BTreeMap<i64, i64> = BTreeMap::new();
    for x in &g.nodes {
        let k = floor_div(x.mult, n);
        if k >= 1 {
            *alpha.entry(k).or_insert(0) += 1;
        }
    }

    let eta = families(g, &branch).len() as i64;
    let (mut iota, mut kappa) = (0, 0);
    for x in g.nodes.iter().filter(|x| x.is_satellite()) {
        if x.hosts().iter().all(|h| t.in_branch[h]) {
            match residue(x.mult, n) {
                Some(Residue::Zero) => iota += 1,
                Some(Residue::PlusOne) => kappa += 1,
                None => {}
            }
        }
    }

    let rg = ResolvedGerm { n, r: g.r, alpha, alpha0_plus, alpha0, eps, j, eta, iota, kappa, ledger };
    if rg.iota != rg.j_total() - rg.eta {
        return Err(ResolutionError::IdentityViolation("ι ≠ j - η"));
    }
    Ok(rg)
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerticalEntry {
    pub curve: Curve,
    pub self_intersection: i64,
    pub in_branch: bool,
    pub fiber_multiplicity: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Family {
    pub curves: Vec<Curve>,
    /// `a ↦ j_a^t`
    pub j: BTreeMap<i64, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerticalLedger {
    pub entries: Vec<VerticalEntry>,
    pub families: Vec<Family>,
}

/// All curves over the fiber and the partition of the vertical branch curves
/// into families. Families are the connected components of the relation
/// "the center of one lies on the other" among branch curves, which the
/// ledger records as dual-graph adjacency before separation; the germ is
/// needed to recover it.
pub fn vertical_ledger(g: &FiberGerm, rg: &ResolvedGerm) -> VerticalLedger {
    let entries = rg
        .ledger
        .iter()
        .map(|e| VerticalEntry {
            curve: e.curve,
            self_intersection: e.self_intersection,
            in_branch: e.in_branch,
            fiber_multiplicity: e.fiber_multiplicity,
        })
        .collect();
    let branch: Vec<Curve> = rg.ledger.iter().filter(|e| e.in_branch).map(|e| e.curve).collect();
    let families = families(g, &branch)
        .into_iter()
        .map(|curves| {
            let mut j = BTreeMap::new();
            for c in &curves {
                if let Some(e) = rg.entry(*c) {
                    *j.entry(-e.self_intersection / rg.n).or_insert(0) += 1;
                }
            }
            Family { curves, j }
        })
        .collect();
    VerticalLedger { entries, families }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct JpBounds {
    /// `ι = j - η`
    pub iota_identity: bool,
    /// `α_0⁺ >= (n-2)(j - η + 2κ)`
    pub ramification: bool,
    /// `Σα_k >= Σ(an-2)j_a + 2η - κ`
    pub singular_points: bool,
}

impl JpBounds {
    pub fn all(&self) -> bool {
        self.iota_identity && self.ramification && self.singular_points
    }
}

pub fn jp_bounds(rg: &ResolvedGerm) -> JpBounds {
    let n = rg.n;
    let j = rg.j_total();
    let rhs3: i64 = rg.j.iter().map(|(&a, &c)| (a * n - 2) * c).sum::<i64>() + 2 * rg.eta - rg.kappa;
    JpBounds {
        iota_identity: rg.iota == j - rg.eta,
        ramification: rg.alpha0_plus >= (n - 2) * (j - rg.eta + 2 * rg.kappa),
        singular_points: rg.alpha_sum() >= rhs3,
    }
}

/// True iff the `ι` identity and both inequalities hold.
pub fn check_jp_bounds(rg: &ResolvedGerm) -> bool {
    jp_bounds(rg).all()
}

/// The topological `e_f(F_p)` computed from the ledger alone.
///
/// The covering restricted to a non-branch rational curve with `b > 0`
/// branch points is a connected `n`-fold cover with Euler number
/// `2n - (n-1)b`, and `n` disjoint copies when `b = 0`. Branch curves lift
/// isomorphically. Double points of the fiber are then removed: `n` preimages
/// where two non-branch curves meet, one where a branch curve meets a
/// non-branch curve. Contracting the lifts of `(-n)`-curves costs `ε`, and
/// the general fiber has Euler number `2n - (n-1)r`.
pub fn euler_local(rg: &ResolvedGerm) -> Result<i64, ResolutionError> {
    let n = rg.n;
    rg.entry(Curve::Fiber).ok_or(ResolutionError::LedgerIncomplete("fiber entry missing"))?;
    let branch: BTreeMap<Curve, bool> = rg.ledger.iter().map(|e| (e.curve, e.in_branch)).collect();
    let mut total = 0;
    let mut seen = BTreeSet::new();
    let (mut n2, mut n3) = (0, 0);
    for e in &rg.ledger {
        let mut adj_branch = 0;
        for &(o, count) in &e.intersections {
            let ob = *branch.get(&o).ok_or(ResolutionError::LedgerIncomplete("dangling intersection"))?;
            adj_branch += i64::from(ob) * count;
            if seen.insert(edge(e.curve, o)) {
                match (e.in_branch, ob) {
                    (false, false) => n2 += count,
                    (true, true) => return Err(ResolutionError::LedgerIncomplete("adjacent branch curves")),
                    _ => n3 += count,
                }
            }
        }
        total += if e.in_branch {
            2
        } else {
            let b = e.horizontal_points + adj_branch;
            if b > 0 {
                2 * n - (n - 1) * b
            } else {
                2 * n
            }
        };
    }
    let e_tilde = total - n * n2 - n3;
    Ok(e_tilde - (2 * n - (n - 1) * rg.r) - rg.eps)
}

/// The t/c bookkeeping for one branch curve of a resolved germ.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HostReport {
    pub curve: Curve,
    pub chains: Vec<Vec<i64>>,
    pub tc: TcReport,
    /// `t` equals `m_C` (or `r` for the fiber).
    pub t_matches: bool,
    /// The number of blow-ups on the curve is `an - 1` (or `an`) with `-an`
    /// its final self-intersection.
    pub a_matches: bool,
    /// The chains are reproduced by their own multiplicity sequences.
    pub sequences_match: bool,
    pub monotone: bool,
    /// Chains whose sequence uses the extra `n = 2` step.
    pub extra_steps: usize,
}

impl HostReport {
    pub fn ok(&self) -> bool {
        self.tc.ok && self.t_matches && self.a_matches && self.sequences_match && self.monotone
    }
}

/// Chains of points along a host curve `C`: each chain starts at a point on
/// `C` and continues through the point where `C` meets the exceptional curve
/// of the previous member.
pub fn host_chains(g: &FiberGerm, c: Curve) -> Vec<Vec<NodeId>> {
    let on_c: Vec<_> = g.nodes_on(c);
    let successor_of = |prev: NodeId| {
        on_c.iter()
            .find(|x| {
                let hs = x.hosts();
                hs.len() == 2 && hs.contains(&c) && hs.contains(&Curve::Exceptional(prev))
            })
            .map(|x| x.id)
    };
    let successors: BTreeSet<NodeId> = on_c.iter().filter_map(|x| successor_of(x.id)).collect();
    let mut chains = Vec::new();
    for x in on_c.iter().filter(|x| !successors.contains(&x.id)) {
        let mut chain = alloc::vec![x.id];
        let mut cur = x.id;
        while let Some(next) = successor_of(cur) {
            chain.push(next);
            cur = next;
        }
        chains.push(chain);
    }
    chains
}

/// Check the t/c identities and monotonicity on every branch curve of a
/// resolved germ.
pub fn host_reports(g: &FiberGerm, rg: &ResolvedGerm) -> Result<Vec<HostReport>, ResolutionError> {
    let n = g.n;
    let mut out = Vec::new();
    for e in rg.ledger.iter().filter(|e| e.in_branch) {
        let c = e.curve;
        let chains: Vec<Vec<i64>> = host_chains(g, c)
            .into_iter()
            .map(|ids| ids.iter().filter_map(|&i| g.node(i)).map(|x| x.mult).collect())
            .collect();
        let profiles = chains
            .iter()
            .map(|m| profile_from_chain(m, n).ok_or(ResolutionError::IdentityViolation("chain has no branch profile")))
            .collect::<Result<Vec<_>, _>>()?;
        let (kind, expected_t) = match c {
            Curve::Fiber => (HostKind::Fiber, g.r),
            Curve::Exceptional(i) => (HostKind::Exceptional, g.node(i).map_or(0, |x| x.mult)),
        };
        let tc = check_tc_identities(kind, n, &profiles)?;
        let sequences_match = tc.sequences.iter().zip(&chains).all(|(s, m)| &s.m == m);
        let monotone = tc.sequences.iter().all(|s| check_monotonicity(s, n));
        let extra_steps = tc.sequences.iter().filter(|s| MultiplicitySequence::has_extra_step(s)).count();
        let a_matches = tc.a == Some(-e.self_intersection / n) && e.self_intersection % n == 0;
        out.push(HostReport {
            curve: c,
            t_matches: tc.t == expected_t,
            a_matches,
            sequences_match,
            monotone,
            extra_steps,
            chains,
            tc,
        });
    }
    Ok(out)
}
