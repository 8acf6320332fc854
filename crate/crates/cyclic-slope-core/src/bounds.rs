//! Invariants on the quotient surface `W`, the corrections from blowing up
//! singular points of the branch curve, and checkable certificates for the
//! lower and upper slope bounds.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::cluster::{floor_div, residue};
use crate::fibration::{genus_hypothesis, lambda_lower, slope_constants, ParamError, SlopeConstants, UpperCase};
use crate::invariants::{invariant_report, GlobalModel, ModelError};
use crate::rational::Rational;
use crate::resolution::ResolvedGerm;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundsError {
    #[error("multiplicity {mult} is not in {n}Z or {n}Z+1")]
    ModNViolation { mult: i64, n: i64 },
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Intersection numbers on the minimal model `W` of the quotient fibration.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SurfaceClassData {
    pub n: i64,
    pub h: i64,
    pub g: i64,
    #[cfg_attr(feature = "serde", serde(rename = "Kphi2"))]
    pub kphi2: Rational,
    #[cfg_attr(feature = "serde", serde(rename = "KphiD"))]
    pub kphi_d: Rational,
    #[cfg_attr(feature = "serde", serde(rename = "D2"))]
    pub d2: Rational,
    #[cfg_attr(feature = "serde", serde(rename = "chiPhi"))]
    pub chi_phi: Rational,
    #[cfg_attr(feature = "serde", serde(rename = "DGamma"))]
    pub d_gamma: Rational,
    #[cfg_attr(feature = "serde", serde(rename = "KphiGamma"))]
    pub kphi_gamma: Rational,
}

impl SurfaceClassData {
    /// `B × Γ` with `𝔡 = p_1^*𝔡_1 + p_2^*𝔡_2`, `deg 𝔡_1 = N`, `deg 𝔡_2 = M`.
    pub fn product(n: i64, h: i64, big_n: i64, big_m: i64) -> Self {
        let g = n * (n - 1) * big_m / 2 + n * (h - 1) + 1;
        SurfaceClassData {
            n,
            h,
            g,
            kphi2: Rational::zero(),
            kphi_d: Rational::from((2 * h - 2) * big_n),
            d2: Rational::from(2 * big_n * big_m),
            chi_phi: Rational::zero(),
            d_gamma: Rational::from(big_m),
            kphi_gamma: Rational::from(2 * h - 2),
        }
    }

    /// A `P^1`-bundle with `R ≡ -(r/2)K_φ + MΓ`, so `𝔡 = R/n`.
    pub fn ruled(g: i64, n: i64, r: i64, m: &Rational) -> Self {
        SurfaceClassData {
            n,
            h: 0,
            g,
            kphi2: Rational::zero(),
            kphi_d: m * Rational::new(-2, n),
            d2: m * Rational::new(2 * r, n * n),
            chi_phi: Rational::zero(),
            d_gamma: Rational::new(r, n),
            kphi_gamma: Rational::from(-2),
        }
    }

    /// `𝔡Γ = 2(g-1-n(h-1))/(n(n-1))` and `K_φΓ = 2(h-1)`.
    pub fn is_consistent(&self) -> bool {
        let (n, h, g) = (self.n, self.h, self.g);
        n >= 2
            && self.d_gamma == Rational::new(2 * (g - 1 - n * (h - 1)), n * (n - 1))
            && self.kphi_gamma == 2 * (h - 1)
    }

    /// Determinant of the intersection matrix of `{K_φ, 𝔡, Γ}`.
    pub fn hodge_determinant(&self) -> Rational {
        &self.kphi_d * &self.d_gamma * &self.kphi_gamma * 2
            - &self.d2 * &self.kphi_gamma * &self.kphi_gamma
            - &self.d_gamma * &self.d_gamma * &self.kphi2
    }
}

/// `(ω_{f'}², χ_{f'})` of the cyclic cover of `W` branched along `R`.
pub fn wlevel_invariants(d: &SurfaceClassData) -> (Rational, Rational) {
    let n = d.n;
    let omega2 = (&d.kphi2 + &d.kphi_d * (2 * (n - 1)) + &d.d2 * ((n - 1) * (n - 1))) * n;
    let chi = &d.chi_phi * n
        + &d.kphi_d * Rational::new(n * (n - 1), 4)
        + &d.d2 * Rational::new(n * (n - 1) * (2 * n - 1), 12);
    (omega2, chi)
}

/// `(ω_{f'}² - K_{f̃}², χ_{f'} - χ_{f̃})` for blow-ups at points of the given
/// multiplicities (0 for centers off the branch curve).
pub fn blowup_corrections(bl: &[i64], n: i64) -> Result<(Rational, Rational), BoundsError> {
    let mut d_omega = 0i64;
    let mut d_chi = 0i64;
    for &m in bl {
        if m < 0 || residue(m, n).is_none() {
            return Err(BoundsError::ModNViolation { mult: m, n });
        }
        let d = floor_div(m, n);
        d_omega += ((n - 1) * d - 1).pow(2);
        d_chi += d * ((2 * n - 1) * d - 3);
    }
    Ok((Rational::from(n * d_omega), Rational::new(n * (n - 1) * d_chi, 12)))
}

/// One named quantity in a certificate's chain of estimates.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Step {
    pub name: String,
    pub value: Rational,
    pub holds: bool,
}

fn step(name: &str, value: Rational, holds: bool) -> Step {
    Step { name: name.into(), value, holds }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Hypotheses {
    pub data_consistent: bool,
    pub h_positive: bool,
    pub genus: bool,
    /// `K_φ² >= 0`
    pub arakelov: bool,
    /// `K_φ² >= 4(h-1)/h χ_φ`
    pub slope_inequality: bool,
    /// `det >= 0`
    pub hodge_index: bool,
}

impl Hypotheses {
    pub fn all(&self) -> bool {
        self.data_consistent && self.h_positive && self.genus && self.arakelov && self.slope_inequality && self.hodge_index
    }

    pub fn failing(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        for (ok, name) in [
            (self.data_consistent, "data_consistent"),
            (self.h_positive, "h_positive"),
            (self.genus, "genus"),
            (self.arakelov, "arakelov"),
            (self.slope_inequality, "slope_inequality"),
            (self.hodge_index, "hodge_index"),
        ] {
            if !ok {
                v.push(name);
            }
        }
        v
    }
}

/// Conditions under which the lower bound is attained.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EqualityDiagnostics {
    /// No blow-ups, or `n = 2` with only negligible singularities.
    pub branch_nonsingular: bool,
    pub slope_equality_on_w: bool,
    pub matrix_singular: bool,
    pub equality: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LowerCertificate {
    pub hypotheses: Hypotheses,
    pub lambda: Rational,
    pub omega2: Rational,
    pub chi_prime: Rational,
    pub d_omega2: Rational,
    pub d_chi: Rational,
    pub eps: i64,
    #[cfg_attr(feature = "serde", serde(rename = "Kf2"))]
    pub kf2: Rational,
    pub chif: Rational,
    pub hodge_determinant: Rational,
    pub chain: Vec<Step>,
    pub verdict: bool,
    pub diagnostics: EqualityDiagnostics,
}

/// Evaluate every step of the lower-bound argument on concrete data.
///
/// Hypotheses are reported, never enforced; the verdict `K_f² >= λχ_f` is
/// computed in all cases.
pub fn lower_bound_certificate(d: &SurfaceClassData, bl: &[i64], eps: i64) -> Result<LowerCertificate, BoundsError> {
    let (n, h, g) = (d.n, d.h, d.g);
    let lambda = lambda_lower(g, h, n)?.lambda;
    let (omega2, chi_prime) = wlevel_invariants(d);
    let (d_omega2, d_chi) = blowup_corrections(bl, n)?;
    let kf2 = &omega2 - &d_omega2 + eps;
    let chif = &chi_prime - &d_chi;
    let det = d.hodge_determinant();

    let slope_rhs = if h >= 1 { &d.chi_phi * Rational::new(4 * (h - 1), h) } else { Rational::zero() };
    let hypotheses = Hypotheses {
        data_consistent: d.is_consistent(),
        h_positive: h >= 1,
        genus: h >= 1 && genus_hypothesis(g, h, n),
        arakelov: d.kphi2.is_nonnegative(),
        slope_inequality: h >= 1 && d.kphi2 >= slope_rhs,
        hodge_index: det.is_nonnegative(),
    };

    let w_margin = &omega2 - &lambda * &chi_prime;
    let big_d = 2 * (2 * n - 1) * (g - 1) - n * (n + 1) * (h - 1);
    let term_k2 = (&d.kphi2 - &lambda * &d.chi_phi) * n;
    let term_kd = (Rational::from(8) - &lambda) * Rational::new(n * (n - 1), 4) * &d.kphi_d;
    let term_d2 = (Rational::from(12 * (n - 1)) - &lambda * (2 * n - 1)) * Rational::new(n * (n - 1), 12) * &d.d2;
    let split = &term_k2 + &term_kd + &term_d2;
    let mut chain = alloc::vec![
        step("omega2 - lambda*chi_prime", w_margin.clone(), w_margin.is_nonnegative()),
        step("n(Kphi2 - lambda*chiPhi)", term_k2, true),
        step("n(n-1)/4 (8-lambda) KphiD", term_kd, true),
        step("n(n-1)/12 (12(n-1)-(2n-1)lambda) D2", term_d2, true),
        step("decomposition", split.clone(), split == w_margin),
    ];
    if h == 1 {
        let v = (&d.kphi_d * (n + 1) - &d.chi_phi * 12) * Rational::new(n * (n - 1), 2 * n - 1);
        chain.push(step("n(n-1)/(2n-1) ((n+1)KphiD - 12 chiPhi)", v.clone(), v == w_margin));
    } else if h >= 2 && big_d != 0 {
        let coef = Rational::new((g - 1) * ((n + 1) * g - (2 * h * n + n - 1) * (2 * n - 1)), (h - 1) * big_d);
        let est = &coef * &d.kphi2;
        chain.push(step("estimate (g-1)((n+1)g-(2hn+n-1)(2n-1))/((h-1)D) Kphi2", est.clone(), est.is_nonnegative()));
        chain.push(step("margin >= estimate", &w_margin - &est, w_margin >= est));
    }
    let blowup_margin = &kf2 - &lambda * &chif - &w_margin;
    chain.push(step("blow-up contribution", blowup_margin.clone(), blowup_margin.is_nonnegative()));
    let total = &kf2 - &lambda * &chif;
    let verdict = total.is_nonnegative();
    chain.push(step("Kf2 - lambda*chif", total.clone(), verdict));

    let negligible = bl.is_empty() || (n == 2 && bl.iter().all(|&m| floor_div(m, 2) == 1));
    let diagnostics = EqualityDiagnostics {
        branch_nonsingular: negligible && eps == 0,
        slope_equality_on_w: h >= 1 && d.kphi2 == slope_rhs,
        matrix_singular: det.is_zero(),
        equality: total.is_zero(),
    };
    Ok(LowerCertificate {
        hypotheses,
        lambda,
        omega2,
        chi_prime,
        d_omega2,
        d_chi,
        eps,
        kf2,
        chif,
        hodge_determinant: det,
        chain,
        verdict,
        diagnostics,
    })
}

/// The estimate of one fiber in the upper-bound argument.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FiberEstimate {
    pub label: String,
    /// `Aα_0 + BΣα_k - (2A+1)ε` on the fiber.
    pub contribution: Rational,
    /// `Σ_{a>=2}(-2A+anB)j_a + (-2A+nB-1)j_1 + ((n-2)A-2B)(j-η) + (2(n-2)A-B)κ`
    pub lower_estimate: Rational,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum UpperVerdict {
    Holds,
    Violated,
    /// `χ_f = 0`: the slope is undefined.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UpperCertificate {
    pub constants: SlopeConstants,
    pub upper: Rational,
    #[cfg_attr(feature = "serde", serde(rename = "Kf2"))]
    pub kf2: Rational,
    pub chif: Rational,
    pub slope: Option<Rational>,
    /// `(12-μ)χ_f - K_f²`
    pub bound_value: Rational,
    /// `Aα_0 + BΣα_k - (2A+1)ε` over the whole model.
    pub linear_form: Rational,
    /// Coefficients `-2A+anB` for every `a` that occurs, keyed by `a`.
    pub j_coefficients: BTreeMap<i64, Rational>,
    pub balance: Rational,
    pub eta_coefficient: Rational,
    pub kappa_coefficient: Rational,
    pub coefficients_ok: bool,
    pub fibers: Vec<FiberEstimate>,
    /// In the small case every fiber must have `j = 0`.
    pub no_vertical_branch: bool,
    pub chain_ok: bool,
    pub verdict: UpperVerdict,
}

fn fiber_estimate(c: &SlopeConstants, label: &str, rg: &ResolvedGerm) -> FiberEstimate {
    let contribution = &c.a * rg.alpha0 + &c.b * rg.alpha_sum() - (&c.a * 2 + 1) * rg.eps;
    let mut est = Rational::zero();
    for (&a, &cnt) in &rg.j {
        let coef = if a == 1 { c.balance() } else { c.j_coefficient(a) };
        est += coef * cnt;
    }
    est += c.eta_coefficient() * (rg.j_total() - rg.eta);
    est += c.kappa_coefficient() * rg.kappa;
    let holds = contribution >= est && est.is_nonnegative();
    FiberEstimate { label: label.into(), contribution, lower_estimate: est, holds }
}

/// Check the upper bound `K_f² <= (12-μ)χ_f` on a model, step by step.
pub fn upper_bound_certificate(model: &GlobalModel) -> Result<UpperCertificate, BoundsError> {
    let (g, n) = (model.params.g, model.params.n);
    if n < 4 {
        return Err(ParamError::UnsupportedOrder(n).into());
    }
    let c = slope_constants(g, n)?;
    let ev = model.evaluate()?;
    let rep = invariant_report(model)?;
    let upper = c.upper();
    let bound_value = &upper * &rep.chif - &rep.kf2;
    let t = &ev.total;
    let linear_form = &c.a * t.alpha0 + &c.b * t.alpha_sum() - (&c.a * 2 + 1) * t.eps;

    let fibers: Vec<FiberEstimate> = ev.resolved.iter().map(|(l, rg)| fiber_estimate(&c, l, rg)).collect();
    let mut j_coefficients = BTreeMap::new();
    for (_, rg) in &ev.resolved {
        for &a in rg.j.keys() {
            j_coefficients.entry(a).or_insert_with(|| c.j_coefficient(a));
        }
    }
    let balance = c.balance();
    let eta_coefficient = c.eta_coefficient();
    let kappa_coefficient = c.kappa_coefficient();
    let coefficients_ok = match c.case {
        UpperCase::Large => {
            balance.is_zero()
                && eta_coefficient.is_positive()
                && kappa_coefficient.is_nonnegative()
                && j_coefficients.values().all(Rational::is_nonnegative)
                && c.a.is_positive()
                && c.b.is_positive()
        }
        UpperCase::Small => c.a.is_positive() && c.b.is_zero(),
    };
    let no_vertical_branch = c.case == UpperCase::Large || ev.resolved.iter().all(|(_, rg)| rg.j_total() == 0);
    let generic_ok = (&c.a * model.generic_alpha0).is_nonnegative();
    let chain_ok = bound_value >= linear_form
        && fibers.iter().all(|f| f.holds)
        && generic_ok
        && coefficients_ok
        && no_vertical_branch
        && linear_form.is_nonnegative();
    let verdict = match &rep.slope {
        None => UpperVerdict::NotApplicable,
        Some(s) if *s <= upper => UpperVerdict::Holds,
        Some(_) => UpperVerdict::Violated,
    };
    Ok(UpperCertificate {
        constants: c,
        upper,
        kf2: rep.kf2,
        chif: rep.chif,
        slope: rep.slope,
        bound_value,
        linear_form,
        j_coefficients,
        balance,
        eta_coefficient,
        kappa_coefficient,
        coefficients_ok,
        fibers,
        no_vertical_branch,
        chain_ok,
        verdict,
    })
}
