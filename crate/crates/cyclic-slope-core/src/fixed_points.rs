//! Fixed-point types of an order-`n` surface automorphism and how they
//! change under blowing up.
//!
//! A fixed point where the linearised action is `diag(ζ^k1, ζ^k2)` has type
//! `(k1, k2)`. Blowing up a point with `k1 = k2` produces a pointwise fixed
//! exceptional curve; otherwise the exceptional curve carries exactly two
//! fixed points, of types `(k1, k2 - k1)` and `(k1 - k2, k2)`.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use num_integer::Integer;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FixedPointError {
    #[error("invalid fixed-point type ({k1},{k2}) mod {n}: {reason}")]
    InvalidType { k1: i64, k2: i64, n: i64, reason: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FixedPointType {
    pub k1: i64,
    pub k2: i64,
    pub n: i64,
}

impl FixedPointType {
    pub fn new(k1: i64, k2: i64, n: i64) -> Result<Self, FixedPointError> {
        let bad = |reason| FixedPointError::InvalidType { k1, k2, n, reason };
        if n < 2 {
            return Err(bad("order must be at least 2"));
        }
        if !(0..n).contains(&k1) || !(0..n).contains(&k2) {
            return Err(bad("exponents must be residues in [0, n-1]"));
        }
        if k2 == 0 {
            return Err(bad("k2 must be positive"));
        }
        if k1.gcd(&k2).gcd(&n) != 1 {
            return Err(bad("gcd(k1, k2, n) must be 1"));
        }
        Ok(FixedPointType { k1, k2, n })
    }

    /// Reduce arbitrary integers mod `n` and validate.
    pub fn reduced(k1: i64, k2: i64, n: i64) -> Result<Self, FixedPointError> {
        Self::new(k1.rem_euclid(n.max(1)), k2.rem_euclid(n.max(1)), n)
    }

    /// `k1 > 0`: the point is not on a one-dimensional fixed locus.
    pub fn is_isolated(&self) -> bool {
        self.k1 > 0
    }

    pub fn is_diagonal(&self) -> bool {
        self.k1 == self.k2
    }

    /// The same point with coordinates swapped so that `k1 <= k2`.
    fn normalized(self) -> Self {
        if self.k1 <= self.k2 {
            self
        } else {
            FixedPointType { k1: self.k2, k2: self.k1, n: self.n }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum OutcomeKind {
    FixedCurve,
    TwoPoints,
}

/// A fixed point on a freshly created exceptional curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChildPoint {
    pub t: FixedPointType,
    /// The child lies on a fixed curve (first exponent 0).
    pub on_fixed_curve: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BlowupOutcome {
    pub kind: OutcomeKind,
    pub children: Vec<ChildPoint>,
}

/// Blow up a fixed point of type `t`.
///
/// For a point `(0, l)` on a fixed curve the generic rule yields the point
/// `(0, l)` where the curve's proper transform meets the exceptional curve
/// and the isolated point `(n - l, l)`.
pub fn blowup_transition(t: FixedPointType) -> Result<BlowupOutcome, FixedPointError> {
    let t = FixedPointType::new(t.k1, t.k2, t.n)?;
    if t.is_diagonal() {
        return Ok(BlowupOutcome { kind: OutcomeKind::FixedCurve, children: Vec::new() });
    }
    let a = FixedPointType::reduced(t.k1, t.k2 - t.k1, t.n)?;
    let b = FixedPointType::reduced(t.k1 - t.k2, t.k2, t.n)?;
    let children = [a, b]
        .into_iter()
        .map(|c| ChildPoint { t: c, on_fixed_curve: c.k1 == 0 })
        .collect();
    Ok(BlowupOutcome { kind: OutcomeKind::TwoPoints, children })
}

/// Result of [`coprime_shift_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoprimeShift {
    pub holds: bool,
    pub witness: Option<(i64, i64)>,
}

/// Exhaustively decide whether no residue pair `(a, b)` with
/// `gcd(a, b, n) = 1` has both `a + 2b` and `2a + b` divisible by `n`.
pub fn coprime_shift_check(n: i64) -> CoprimeShift {
    assert!(n >= 1, "coprime_shift_check needs n >= 1");
    for a in 0..n {
        for b in 0..n {
            if a.gcd(&b).gcd(&n) == 1 && (a + 2 * b) % n == 0 && (2 * a + b) % n == 0 {
                return CoprimeShift { holds: false, witness: Some((a, b)) };
            }
        }
    }
    CoprimeShift { holds: true, witness: None }
}

/// Isolated children of a non-diagonal isolated type, normalised.
fn isolated_children(t: FixedPointType) -> Vec<FixedPointType> {
    match blowup_transition(t) {
        Ok(o) => o
            .children
            .into_iter()
            .filter(|c| !c.on_fixed_curve)
            .map(|c| c.t.normalized())
            .collect(),
        Err(_) => Vec::new(),
    }
}

/// Can some finite sequence of blow-ups starting at `t` leave no isolated
/// fixed points?
///
/// Isolated points evolve independently, so a collection of points can be
/// cleared exactly when each member type can. The search collects every type
/// reachable from `t` breadth-first and then computes the least set of
/// clearable types: diagonal types, plus any type whose isolated children
/// are all clearable.
pub fn resolvable_search(t: FixedPointType) -> bool {
    let t = match FixedPointType::new(t.k1, t.k2, t.n) {
        Ok(t) if t.is_isolated() => t.normalized(),
        _ => return false,
    };
    let mut edges: BTreeMap<FixedPointType, Vec<FixedPointType>> = BTreeMap::new();
    let mut queue = VecDeque::from([t]);
    while let Some(u) = queue.pop_front() {
        if edges.contains_key(&u) {
            continue;
        }
        let kids = if u.is_diagonal() { Vec::new() } else { isolated_children(u) };
        for k in &kids {
            if !edges.contains_key(k) {
                queue.push_back(*k);
            }
        }
        edges.insert(u, kids);
    }
    let mut good: BTreeSet<FixedPointType> =
        edges.keys().copied().filter(|u| u.is_diagonal()).collect();
    loop {
        let before = good.len();
        for (u, kids) in &edges {
            if !good.contains(u) && kids.iter().all(|k| good.contains(k)) {
                good.insert(*u);
            }
        }
        if good.len() == before {
            break;
        }
    }
    good.contains(&t)
}
