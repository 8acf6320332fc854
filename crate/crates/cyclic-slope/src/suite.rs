//! The verification ledger: every invariant suite run over the bounded
//! enumeration, one outcome per acceptance criterion.

use cyclic_slope_core::bounds::{lower_bound_certificate, upper_bound_certificate, SurfaceClassData, UpperVerdict};
use cyclic_slope_core::cluster::{is_standard, ClusterNode, FiberGerm};
use cyclic_slope_core::examples::{enumerate_resolvable, product_example, EnumerationBudget, ExampleError, ProductExampleParams};
use cyclic_slope_core::fibration::genus_hypothesis;
use cyclic_slope_core::fixed_points::{coprime_shift_check, resolvable_search, FixedPointType};
use cyclic_slope_core::invariants::{horikawa_index, invariant_report, GlobalModel, InvariantReport, LabeledGerm};
use cyclic_slope_core::rational::q;
use cyclic_slope_core::resolution::{euler_local, host_reports, jp_bounds, resolve_germ, ResolvedGerm};
use cyclic_slope_core::{lambda_lower, lambda_upper, slope_constants, FibrationParams, Rational, UpperCase};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const MAX_LOGGED: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub orders: Vec<i64>,
    /// Restrict the sweep to this branch degree.
    pub r: Option<i64>,
    pub max_nodes: usize,
    pub max_contact: i64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { orders: vec![2, 3, 4, 5], r: None, max_nodes: 5, max_contact: 3 }
    }
}

impl SuiteConfig {
    /// `(n, r)` pairs of the germ sweep: `r = n, 2n, 3n, 4n` unless a single
    /// `r` was requested.
    pub fn sweep_params(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for &n in &self.orders {
            match self.r {
                Some(r) if r > 0 && r % n == 0 => out.push((n, r)),
                Some(_) => {}
                None => out.extend((1..=4).map(|k| (n, k * n))),
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub title: String,
    pub checked: usize,
    pub failure_count: usize,
    /// The first few failures.
    pub failures: Vec<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub germs: usize,
    pub models: usize,
    pub criteria: Vec<CriterionOutcome>,
    pub passed: bool,
}

#[derive(Default)]
struct Tally {
    checked: usize,
    failures: Vec<String>,
    failure_count: usize,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < MAX_LOGGED {
                self.failures.push(what());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.failure_count += other.failure_count;
        for f in other.failures {
            if self.failures.len() < MAX_LOGGED {
                self.failures.push(f);
            }
        }
        self
    }

    fn finish(self, id: u32, title: &str) -> CriterionOutcome {
        CriterionOutcome {
            id,
            title: title.to_string(),
            checked: self.checked,
            failure_count: self.failure_count,
            passed: self.failure_count == 0 && self.checked > 0,
            failures: self.failures,
        }
    }
}

struct SweepItem {
    germ: FiberGerm,
    resolved: Result<ResolvedGerm, String>,
}

struct ModelItem {
    params: FibrationParams,
    model: Option<GlobalModel>,
    report: Result<InvariantReport, String>,
}

fn short(g: &FiberGerm) -> String {
    serde_json::to_string(g).unwrap_or_else(|_| format!("{g:?}"))
}

fn sweep(config: &SuiteConfig) -> Vec<SweepItem> {
    config
        .sweep_params()
        .into_par_iter()
        .flat_map_iter(|(n, r)| enumerate_resolvable(n, r, EnumerationBudget::new(config.max_nodes, r), config.max_contact))
        .map(|germ| {
            let resolved = resolve_germ(&germ).map_err(|e| e.to_string());
            SweepItem { germ, resolved }
        })
        .collect()
}

fn models(items: &[SweepItem]) -> Vec<ModelItem> {
    items
        .par_iter()
        .filter_map(|it| {
            let params = FibrationParams::from_branch_degree(it.germ.r, 0, it.germ.n).ok()?;
            let lg = LabeledGerm { label: "p".into(), germ: it.germ.clone() };
            let (model, report) = match GlobalModel::from_germs(params, vec![lg]) {
                Ok(m) => {
                    let report = invariant_report(&m).map_err(|e| e.to_string());
                    (Some(m), report)
                }
                Err(e) => (None, Err(format!("{}: {e}", short(&it.germ)))),
            };
            Some(ModelItem { params, model, report })
        })
        .collect()
}

fn frac(p: i128, d: i128) -> Rational {
    let g = num_gcd(p, d);
    q((p / g) as i64, (d / g) as i64)
}

fn num_gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs().max(1)
}

fn criterion_1() -> CriterionOutcome {
    let mut t = Tally::default();
    for g in 2..=200i64 {
        let gi = g as i128;
        let cases = [
            (2, frac(4 * gi - 4, gi)),
            (3, frac(24 * (gi - 1), 5 * gi + 1)),
            (4, frac(36 * (gi - 1), 7 * gi + 3)),
        ];
        for (n, expected) in cases {
            let got = lambda_lower(g, 0, n).map(|b| b.lambda);
            t.check(got.as_ref() == Ok(&expected), || format!("g={g} n={n}: {got:?} vs {expected}"));
        }
    }
    t.finish(1, "lower slope specializations for n = 2, 3, 4 and g = 2..200")
}

fn criterion_2(ms: &[ModelItem]) -> CriterionOutcome {
    let t = ms
        .par_iter()
        .map(|mi| {
            let mut t = Tally::default();
            match &mi.report {
                Ok(rep) => {
                    let p = mi.params;
                    match lambda_lower(p.g, 0, p.n) {
                        Ok(b) => {
                            let ind: Rational = rep.ind_per_fiber.values().sum();
                            let residual = &rep.kf2 - &b.lambda * &rep.chif - ind;
                            t.check(residual.is_zero(), || format!("g={} n={}: residual {residual}", p.g, p.n));
                        }
                        Err(e) => t.check(false, || e.to_string()),
                    }
                }
                Err(e) => t.check(false, || e.clone()),
            }
            t
        })
        .reduce(Tally::default, Tally::merge);
    t.finish(2, "slope equality K_f^2 - lambda chi_f - sum Ind = 0")
}

fn criterion_3(ms: &[ModelItem]) -> CriterionOutcome {
    let mut t = Tally::default();
    for mi in ms {
        match &mi.report {
            Ok(rep) => t.check(&rep.chif * 12 == &rep.kf2 + &rep.ef, || {
                format!("g={} n={}: 12chi={} K2+e={}", mi.params.g, mi.params.n, &rep.chif * 12, &rep.kf2 + &rep.ef)
            }),
            Err(e) => t.check(false, || e.clone()),
        }
    }
    t.finish(3, "Noether 12 chi_f = K_f^2 + e_f")
}

fn anchor_germs() -> Vec<(FiberGerm, i64)> {
    let double = FiberGerm::with_nodes(2, 6, vec![ClusterNode::root(1, 2)]);
    let triple = FiberGerm::with_nodes(
        2,
        6,
        vec![
            ClusterNode::root(1, 3),
            ClusterNode::child(2, 1, 2),
            ClusterNode::child(3, 1, 2),
            ClusterNode::child(4, 1, 2),
        ],
    );
    vec![(double, 2), (triple, 6)]
}

fn criterion_4(items: &[SweepItem]) -> CriterionOutcome {
    let mut t = items
        .par_iter()
        .map(|it| {
            let mut t = Tally::default();
            match &it.resolved {
                Ok(rg) => {
                    let n = rg.n;
                    let expected = (n - 1) * rg.alpha0 + n * rg.alpha_sum() - (2 * n - 1) * rg.eps;
                    let got = euler_local(rg);
                    t.check(got == Ok(expected), || format!("{}: {got:?} vs {expected}", short(&it.germ)));
                }
                Err(e) => t.check(false, || format!("{}: {e}", short(&it.germ))),
            }
            t
        })
        .reduce(Tally::default, Tally::merge);
    for (g, e) in anchor_germs() {
        let got = resolve_germ(&g).map_err(|e| e.to_string()).and_then(|rg| euler_local(&rg).map_err(|e| e.to_string()));
        t.check(got == Ok(e), || format!("anchor {}: {got:?} vs {e}", short(&g)));
    }
    t.finish(4, "local Euler number from the curve ledger equals the index formula")
}

fn criterion_5(items: &[SweepItem]) -> CriterionOutcome {
    let t = items
        .par_iter()
        .map(|it| {
            let mut t = Tally::default();
            let Ok(rg) = &it.resolved else {
                t.check(false, || short(&it.germ));
                return t;
            };
            let jp = jp_bounds(rg);
            t.check(jp.all(), || format!("{}: {jp:?}", short(&it.germ)));
            match host_reports(&it.germ, rg) {
                Ok(hs) => {
                    for h in hs {
                        t.check(h.ok(), || format!("{} host {:?}", short(&it.germ), h.curve));
                    }
                }
                Err(e) => t.check(false, || format!("{}: {e}", short(&it.germ))),
            }
            t
        })
        .reduce(Tally::default, Tally::merge);
    t.finish(5, "t/c identities, monotonicity and d-gap, iota = j - eta and both inequalities")
}

fn product_grid() -> impl Iterator<Item = ProductExampleParams> {
    (2..=6).flat_map(|n| {
        (0..=4).flat_map(move |h| {
            (1..=10).flat_map(move |big_n| (1..=10).map(move |big_m| ProductExampleParams { n, h, big_n, big_m }))
        })
    })
}

fn criterion_6() -> CriterionOutcome {
    let mut t = Tally::default();
    for p in product_grid() {
        match product_example(p) {
            Ok(e) => {
                let lambda = lambda_lower(e.g, p.h, p.n).map(|b| b.lambda);
                t.check(lambda.as_ref() == Ok(&e.slope), || format!("{p:?}: slope {} vs {lambda:?}", e.slope));
            }
            Err(ExampleError::InvalidParams(_) | ExampleError::DegenerateExample) => {}
            Err(e) => t.check(false, || format!("{p:?}: {e}")),
        }
    }
    t.finish(6, "product examples attain the lower bound")
}

fn criterion_7() -> CriterionOutcome {
    let mut t = Tally::default();
    for p in product_grid().filter(|p| p.h >= 1) {
        let d = SurfaceClassData::product(p.n, p.h, p.big_n, p.big_m);
        if !genus_hypothesis(d.g, p.h, p.n) {
            continue;
        }
        match lower_bound_certificate(&d, &[], 0) {
            Ok(c) => {
                let ok = c.verdict
                    && c.hypotheses.all()
                    && c.chain.iter().all(|s| s.holds)
                    && c.diagnostics.equality
                    && c.hodge_determinant.is_zero();
                t.check(ok, || format!("{p:?}: failing {:?}", c.hypotheses.failing()));
            }
            Err(e) => t.check(false, || format!("{p:?}: {e}")),
        }
    }
    t.finish(7, "lower bound certificate on the product grid with h >= 1")
}

fn criterion_8(ms: &[ModelItem]) -> CriterionOutcome {
    let mut t = ms
        .par_iter()
        .filter(|mi| mi.params.n >= 4 && mi.params.r != mi.params.n)
        .map(|mi| {
            let mut t = Tally::default();
            let p = mi.params;
            let Some(model) = &mi.model else {
                t.check(false, || format!("g={} n={}: model construction failed", p.g, p.n));
                return t;
            };
            match upper_bound_certificate(model) {
                Ok(c) => t.check(c.verdict == UpperVerdict::Holds && c.chain_ok, || {
                    format!("g={} n={}: {:?} slope {:?} bound {}", p.g, p.n, c.verdict, c.slope, c.upper)
                }),
                Err(e) => t.check(false, || format!("g={} n={}: {e}", p.g, p.n)),
            }
            t
        })
        .reduce(Tally::default, Tally::merge);
    for n in 4..=20i64 {
        let mut r = n * (n - 1);
        while r <= n * (n - 1) + 40 * n {
            if let Ok(p) = FibrationParams::from_branch_degree(r, 0, n) {
                match slope_constants(p.g, n) {
                    Ok(c) => t.check(
                        c.case == UpperCase::Large && c.balance().is_zero() && c.eta_coefficient().is_positive(),
                        || format!("constants n={n} r={r}: balance {} eta {}", c.balance(), c.eta_coefficient()),
                    ),
                    Err(e) => t.check(false, || format!("constants n={n} r={r}: {e}")),
                }
            }
            r += n;
        }
    }
    for (g, n, v) in [(9, 4, q(32, 5)), (21, 4, q(10, 1)), (15, 4, q(273, 31)), (16, 5, q(15, 2))] {
        let got = lambda_upper(g, n);
        t.check(got.as_ref() == Ok(&v), || format!("anchor g={g} n={n}: {got:?} vs {v}"));
    }
    t.finish(8, "upper bound for n = 4, 5, constants for n = 4..20, anchor values")
}

fn criterion_9() -> CriterionOutcome {
    let mut t = Tally::default();
    for n in 4..=64 {
        let c = coprime_shift_check(n);
        t.check(c.holds && c.witness.is_none(), || format!("coprime shift n={n}: {c:?}"));
    }
    let c = coprime_shift_check(3);
    t.check(!c.holds && c.witness == Some((1, 1)), || format!("coprime shift n=3: {c:?}"));
    let per_n: Vec<Tally> = (4..=24i64)
        .into_par_iter()
        .map(|n| {
            let mut t = Tally::default();
            for k1 in 1..n {
                for k2 in 1..n {
                    if let Ok(ty) = FixedPointType::new(k1, k2, n) {
                        let got = resolvable_search(ty);
                        t.check(got == (k1 == k2), || format!("({k1},{k2}) mod {n}: {got}"));
                    }
                }
            }
            t
        })
        .collect();
    let t = per_n.into_iter().fold(t, Tally::merge);
    t.finish(9, "coprime shift for n = 4..64 and diagonal-type resolvability for n = 4..24")
}

fn criterion_10(items: &[SweepItem]) -> CriterionOutcome {
    let t = items
        .par_iter()
        .map(|it| {
            let mut t = Tally::default();
            let Ok(rg) = &it.resolved else {
                t.check(false, || short(&it.germ));
                return t;
            };
            let ind = horikawa_index(rg.n, rg.r, &rg.indices());
            t.check(ind.is_nonnegative(), || format!("{}: Ind = {ind}", short(&it.germ)));
            let e = euler_local(rg);
            t.check(matches!(e, Ok(v) if v >= 0), || format!("{}: e_f = {e:?}", short(&it.germ)));
            if rg.n == 2 && rg.r > 2 && is_standard(&it.germ) {
                let only_simple = rg.alpha.iter().all(|(&k, &a)| k == 1 || a == 0) && rg.eps == 0;
                t.check(ind.is_zero() == only_simple, || format!("{}: Ind = {ind}", short(&it.germ)));
            }
            t
        })
        .reduce(Tally::default, Tally::merge);
    t.finish(10, "Ind >= 0 and e_f >= 0; Ind = 0 for n = 2 exactly with only alpha_1")
}

/// Run every criterion. Sweep-based criteria use `config`; the others run
/// on their fixed grids.
pub fn run(config: &SuiteConfig) -> SuiteReport {
    let items = sweep(config);
    let ms = models(&items);
    let criteria = vec![
        criterion_1(),
        criterion_2(&ms),
        criterion_3(&ms),
        criterion_4(&items),
        criterion_5(&items),
        criterion_6(),
        criterion_7(),
        criterion_8(&ms),
        criterion_9(),
        criterion_10(&items),
    ];
    let passed = criteria.iter().all(|c| c.passed);
    SuiteReport { config: config.clone(), germs: items.len(), models: ms.len(), criteria, passed }
}
