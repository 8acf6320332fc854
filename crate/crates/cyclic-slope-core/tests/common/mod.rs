#![allow(dead_code)]

use cyclic_slope_core::cluster::FiberGerm;
use cyclic_slope_core::examples::{enumerate_resolvable, EnumerationBudget};
use cyclic_slope_core::invariants::{GlobalModel, LabeledGerm};
use cyclic_slope_core::FibrationParams;

pub const MAX_NODES: usize = 5;
pub const MAX_CONTACT: i64 = 3;

/// Every `(n, r)` of the sweep: `n = 2..5`, `r = n, 2n, 3n, 4n`.
pub fn sweep_params() -> Vec<(i64, i64)> {
    (2..=5).flat_map(|n| (1..=4).map(move |k| (n, k * n))).collect()
}

pub fn sweep_germs() -> Vec<FiberGerm> {
    sweep_params()
        .into_iter()
        .flat_map(|(n, r)| enumerate_resolvable(n, r, EnumerationBudget::new(MAX_NODES, r), MAX_CONTACT))
        .collect()
}

/// One model per germ over `P^1` (`h = 0`), skipping `(n, r)` with `g < 2`.
pub fn sweep_models() -> Vec<GlobalModel> {
    sweep_germs()
        .into_iter()
        .filter_map(|g| {
            let params = FibrationParams::from_branch_degree(g.r, 0, g.n).ok()?;
            let germ = LabeledGerm { label: "p".into(), germ: g };
            Some(GlobalModel::from_germs(params, vec![germ]).expect("model"))
        })
        .collect()
}
