//! Global relative invariants of a genus-`g` fibration over `P^1` with
//! quotient genus 0, assembled from fiber germs.
//!
//! The branch divisor is numerically `-(r/2)K_φ + MΓ`. Listed fibers carry
//! germs; all other ramification of the horizontal branch curve is simple
//! and is summarised by `generic_alpha0`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::cluster::FiberGerm;
use crate::fibration::{lambda_lower, FibrationParams, ParamError};
use crate::rational::Rational;
use crate::resolution::{resolve_germ, GermIndices, ResolutionError, ResolvedGerm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("quotient genus must be 0, got {0}")]
    NotRuled(i64),
    #[error("germ `{label}` has (n, r) = ({n}, {r}), expected ({en}, {er})")]
    GermMismatch { label: String, n: i64, r: i64, en: i64, er: i64 },
    #[error("germ `{label}`: {error}")]
    Resolution { label: String, error: ResolutionError },
    #[error("M = {0} is not half-integral")]
    NonHalfIntegralM(Rational),
    #[error("generic α_0 = {0} is negative")]
    NegativeGenericAlpha0(i64),
    #[error("α_0 = {actual} but 2(r-1)M - nΣk(nk-1)α_k + 2ε = {expected}")]
    AlphaMismatch { expected: Rational, actual: i64 },
    #[error("inconsistent model: {0}")]
    InconsistentModel(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LabeledGerm {
    pub label: String,
    pub germ: FiberGerm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GlobalModel {
    pub params: FibrationParams,
    #[cfg_attr(feature = "serde", serde(rename = "M"))]
    pub m: Rational,
    pub germs: Vec<LabeledGerm>,
    pub generic_alpha0: i64,
}

/// `n Σ k(nk-1) α_k`
fn alpha_weight(n: i64, alpha: &BTreeMap<i64, i64>) -> i64 {
    alpha.iter().map(|(&k, &a)| n * k * (n * k - 1) * a).sum()
}

/// `M = (α_0 + nΣk(nk-1)α_k - 2ε) / (2(r-1))`, required to be half-integral.
pub fn m_from_indices(n: i64, r: i64, alpha0: i64, alpha: &BTreeMap<i64, i64>, eps: i64) -> Result<Rational, ModelError> {
    if r < 2 {
        return Err(ModelError::InconsistentModel("r must be at least 2"));
    }
    let m = Rational::new(alpha0 + alpha_weight(n, alpha) - 2 * eps, 2 * (r - 1));
    if !(&m * 2).is_integer() {
        return Err(ModelError::NonHalfIntegralM(m));
    }
    Ok(m)
}

fn add_indices(acc: &mut GermIndices, x: &GermIndices) {
    acc.alpha0 += x.alpha0;
    acc.eps += x.eps;
    for (&k, &a) in &x.alpha {
        *acc.alpha.entry(k).or_insert(0) += a;
    }
}

impl GlobalModel {
    fn check_params(params: &FibrationParams) -> Result<(), ModelError> {
        if params.h != 0 {
            return Err(ModelError::NotRuled(params.h));
        }
        let _ = FibrationParams::new(params.g, params.h, params.n)?;
        Ok(())
    }

    /// A model whose `M` is computed from the germs and the given generic
    /// ramification.
    pub fn with_generic(params: FibrationParams, germs: Vec<LabeledGerm>, generic_alpha0: i64) -> Result<Self, ModelError> {
        Self::check_params(&params)?;
        let total = totals(&params, &germs, generic_alpha0)?.0;
        let m = m_from_indices(params.n, params.r, total.alpha0, &total.alpha, total.eps)?;
        Ok(GlobalModel { params, m, germs, generic_alpha0 })
    }

    /// The generic ramification `α_0` that a model with these germs needs in
    /// order to have the prescribed `M`, if it is an integer.
    pub fn generic_for(params: &FibrationParams, germs: &[LabeledGerm], m: &Rational) -> Result<Option<i64>, ModelError> {
        Self::check_params(params)?;
        let (listed, _) = totals(params, germs, 0)?;
        let (n, r) = (params.n, params.r);
        let needed = m * (2 * (r - 1)) - alpha_weight(n, &listed.alpha) + 2 * listed.eps - listed.alpha0;
        Ok(needed.to_i64().filter(|_| needed.is_integer()))
    }

    /// Complete a list of germs to a consistent model: the smallest generic
    /// ramification that makes `M` half-integral, keeps the global `α_0`
    /// nonnegative and gives `χ_f > 0` (unless there is nothing at all).
    pub fn from_germs(params: FibrationParams, germs: Vec<LabeledGerm>) -> Result<Self, ModelError> {
        Self::check_params(&params)?;
        let (n, r) = (params.n, params.r);
        let (listed, _) = totals(&params, &germs, 0)?;
        let x = listed.alpha0 + alpha_weight(n, &listed.alpha) - 2 * listed.eps;
        let mut a = (-listed.alpha0).max(0);
        a += (r - 1 - (x + a).rem_euclid(r - 1)) % (r - 1);
        for _ in 0..256 {
            let model = Self::with_generic(params, germs.clone(), a)?;
            let rep = invariant_report(&model)?;
            if rep.chif.is_positive() || (germs.is_empty() && a == 0) {
                return Ok(model);
            }
            a += r - 1;
        }
        Err(ModelError::InconsistentModel("no generic ramification gives χ_f > 0"))
    }

    /// The smooth-branch model: no singular fibers, `α_0 = 2(r-1)M`.
    pub fn smooth(params: FibrationParams, m: i64) -> Result<Self, ModelError> {
        Self::with_generic(params, Vec::new(), 2 * (params.r - 1) * m)
    }

    /// Resolve all germs and check every model invariant.
    pub fn evaluate(&self) -> Result<Evaluated, ModelError> {
        Self::check_params(&self.params)?;
        if self.generic_alpha0 < 0 {
            return Err(ModelError::NegativeGenericAlpha0(self.generic_alpha0));
        }
        if !(&self.m * 2).is_integer() {
            return Err(ModelError::NonHalfIntegralM(self.m.clone()));
        }
        let (total, resolved) = totals(&self.params, &self.germs, self.generic_alpha0)?;
        let (n, r) = (self.params.n, self.params.r);
        let expected = &self.m * (2 * (r - 1)) - alpha_weight(n, &total.alpha) + 2 * total.eps;
        if expected != total.alpha0 {
            return Err(ModelError::AlphaMismatch { expected, actual: total.alpha0 });
        }
        Ok(Evaluated { total, resolved })
    }
}

fn totals(
    params: &FibrationParams,
    germs: &[LabeledGerm],
    generic_alpha0: i64,
) -> Result<(GermIndices, Vec<(String, ResolvedGerm)>), ModelError> {
    let mut total = GermIndices { alpha0: generic_alpha0, ..Default::default() };
    let mut resolved = Vec::with_capacity(germs.len());
    for lg in germs {
        let g = &lg.germ;
        if g.n != params.n || g.r != params.r {
            return Err(ModelError::GermMismatch { label: lg.label.clone(), n: g.n, r: g.r, en: params.n, er: params.r });
        }
        let rg = resolve_germ(g).map_err(|error| ModelError::Resolution { label: lg.label.clone(), error })?;
        add_indices(&mut total, &rg.indices());
        resolved.push((lg.label.clone(), rg));
    }
    Ok((total, resolved))
}

/// A model with every germ resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluated {
    /// Global indices, including the generic ramification in `α_0`.
    pub total: GermIndices,
    pub resolved: Vec<(String, ResolvedGerm)>,
}

/// `(K_f², χ_f, e_f)` from the global indices.
fn invariants_from_indices(n: i64, r: i64, idx: &GermIndices) -> (Rational, Rational, Rational) {
    let a0e = Rational::from(idx.alpha0 - 2 * idx.eps);
    let quad: i64 = idx.alpha.iter().map(|(&k, &a)| k * (r - n * k) * a).sum();
    let sum_alpha = idx.alpha_sum();
    let pre = Rational::new(n - 1, r - 1);
    let k2 = &pre * (&a0e * Rational::new((n - 1) * r - 2 * n, n) + (n + 1) * quad) - n * sum_alpha + idx.eps;
    let chi = Rational::new(n - 1, 12 * (r - 1)) * (&a0e * Rational::new((2 * n - 1) * r - 3 * n, n) + (n + 1) * quad);
    let e = Rational::from((n - 1) * idx.alpha0 + n * sum_alpha - (2 * n - 1) * idx.eps);
    (k2, chi, e)
}

/// `(K_f², χ_f)` through `M`: invariants of the resolved double cover,
/// corrected by the contracted `(-1)`-curves.
fn invariants_from_m(n: i64, r: i64, m: &Rational, idx: &GermIndices) -> (Rational, Rational) {
    let k2_tilde = m * Rational::new(2 * (n - 1) * ((n - 1) * r - 2 * n), n)
        - n * idx.alpha.iter().map(|(&k, &a)| ((n - 1) * k - 1).pow(2) * a).sum::<i64>();
    let chi_tilde = m * Rational::new((n - 1) * (r * (2 * n - 1) - 3 * n), 6 * n)
        - Rational::new(n * (n - 1), 12) * idx.alpha.iter().map(|(&k, &a)| ((2 * n - 1) * k * k - 3 * k) * a).sum::<i64>();
    (k2_tilde + idx.eps, chi_tilde)
}

/// `(K_f², χ_f, e_f)`, computed from the indices and cross-checked against
/// the `M` route and Noether's formula.
pub fn relative_invariants(model: &GlobalModel) -> Result<(Rational, Rational, Rational), ModelError> {
    let ev = model.evaluate()?;
    relative_invariants_evaluated(model, &ev)
}

fn relative_invariants_evaluated(model: &GlobalModel, ev: &Evaluated) -> Result<(Rational, Rational, Rational), ModelError> {
    let (n, r) = (model.params.n, model.params.r);
    let (k2, chi, e) = invariants_from_indices(n, r, &ev.total);
    let (k2m, chim) = invariants_from_m(n, r, &model.m, &ev.total);
    if k2 != k2m || chi != chim {
        return Err(ModelError::InconsistentModel("index and M routes disagree"));
    }
    if &chi * 12 != &k2 + &e {
        return Err(ModelError::InconsistentModel("12χ_f ≠ K_f² + e_f"));
    }
    Ok((k2, chi, e))
}

/// Horikawa index
/// `Ind = n Σ_k ((n+1)(n-1)(r-nk)k / ((2n-1)r-3n) - 1) α_k + ε`,
/// identically 0 when `r = n`.
pub fn horikawa_index(n: i64, r: i64, idx: &GermIndices) -> Rational {
    if r == n {
        return Rational::zero();
    }
    let den = (2 * n - 1) * r - 3 * n;
    let mut ind = Rational::from(idx.eps);
    for (&k, &a) in &idx.alpha {
        ind += (Rational::new((n + 1) * (n - 1) * (r - n * k) * k, den) - 1) * (n * a);
    }
    ind
}

/// Coefficient of `α_k` in the Horikawa index.
pub fn horikawa_coefficient(n: i64, r: i64, k: i64) -> Rational {
    horikawa_index(n, r, &GermIndices { alpha0: 0, alpha: BTreeMap::from([(k, 1)]), eps: 0 })
}

/// Local signature
/// `σ = -(n-1)(n+1)r/(3n(r-1)) α_0 + Σ_k ((n-1)(n+1)(rk-nk²)/(3(r-1)) - n) α_k
///      + ((n+2)(2n-1)r - 3n)/(3n(r-1)) ε`.
pub fn local_signature(n: i64, r: i64, idx: &GermIndices) -> Rational {
    let mut s = Rational::new(-(n - 1) * (n + 1) * r * idx.alpha0, 3 * n * (r - 1));
    for (&k, &a) in &idx.alpha {
        s += (Rational::new((n - 1) * (n + 1) * (r * k - n * k * k), 3 * (r - 1)) - n) * a;
    }
    s + Rational::new(((n + 2) * (2 * n - 1) * r - 3 * n) * idx.eps, 3 * n * (r - 1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InvariantReport {
    #[cfg_attr(feature = "serde", serde(rename = "Kf2"))]
    pub kf2: Rational,
    pub chif: Rational,
    pub ef: Rational,
    pub slope: Option<Rational>,
    pub lambda: Rational,
    pub ind_per_fiber: BTreeMap<String, Rational>,
    pub sigma_per_fiber: BTreeMap<String, Rational>,
    pub sign_total: Rational,
    /// `K_f² - 8χ_f`
    pub sign_via_k_chi: Rational,
    /// `K_f² - λχ_f - ΣInd`
    pub slope_residual: Rational,
}

/// Label under which generic fibers contribute to the signature.
pub const GENERIC_LABEL: &str = "generic";

pub fn invariant_report(model: &GlobalModel) -> Result<InvariantReport, ModelError> {
    let ev = model.evaluate()?;
    let (n, r, g) = (model.params.n, model.params.r, model.params.g);
    let (kf2, chif, ef) = relative_invariants_evaluated(model, &ev)?;
    let lambda = lambda_lower(g, 0, n)?.lambda;
    let mut ind_per_fiber = BTreeMap::new();
    let mut sigma_per_fiber = BTreeMap::new();
    for (label, rg) in &ev.resolved {
        let idx = rg.indices();
        ind_per_fiber.insert(label.clone(), horikawa_index(n, r, &idx));
        sigma_per_fiber.insert(label.clone(), local_signature(n, r, &idx));
    }
    if model.generic_alpha0 != 0 {
        let generic = GermIndices { alpha0: model.generic_alpha0, ..Default::default() };
        sigma_per_fiber.insert(GENERIC_LABEL.to_string(), local_signature(n, r, &generic));
    }
    let ind_total: Rational = ind_per_fiber.values().sum();
    let slope_residual = &kf2 - &lambda * &chif - ind_total;
    let sign_total: Rational = sigma_per_fiber.values().sum();
    let sign_via_k_chi = &kf2 - &chif * 8;
    let slope = if chif.is_positive() { kf2.checked_div(&chif) } else { None };
    Ok(InvariantReport {
        kf2,
        chif,
        ef,
        slope,
        lambda,
        ind_per_fiber,
        sigma_per_fiber,
        sign_total,
        sign_via_k_chi,
        slope_residual,
    })
}

/// `K_f² - λ_{g,0,n} χ_f - Σ Ind(F_p)`; zero on every valid model.
pub fn slope_equality_check(model: &GlobalModel) -> Result<Rational, ModelError> {
    invariant_report(model).map(|r| r.slope_residual)
}

/// The signature as a sum of local signatures and as `K_f² - 8χ_f`.
pub fn signature_total(model: &GlobalModel) -> Result<(Rational, Rational), ModelError> {
    invariant_report(model).map(|r| (r.sign_total, r.sign_via_k_chi))
}
