//! Fibration parameters `(g, h, n)`, the branch degree `r`, and the
//! closed-form lower and upper slope bounds.

use crate::rational::Rational;

/// Errors raised while validating `(g, h, n)`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamError {
    #[error("covering order n={0} must be at least 2")]
    InvalidOrder(i64),
    #[error("fiber genus g={0} must be at least 2")]
    InvalidGenus(i64),
    #[error("quotient genus h={0} must be nonnegative")]
    InvalidQuotientGenus(i64),
    #[error("n-1={denom} does not divide 2(g-1-n(h-1))={numer}")]
    NonIntegralR { numer: i64, denom: i64 },
    #[error("branch degree r={r} is not a multiple of n={n}")]
    NotMultipleOfN { r: i64, n: i64 },
    #[error("branch degree r={0} is not positive")]
    NonPositiveR(i64),
    #[error("order n={0} is not supported by the upper bound (needs n >= 4)")]
    UnsupportedOrder(i64),
    #[error("the slope bound denominator vanishes for (g={g}, h={h}, n={n})")]
    DegenerateLambda { g: i64, h: i64, n: i64 },
    #[error("the upper bound is undefined for r={r}, n={n}")]
    DegenerateUpper { r: i64, n: i64 },
}

/// A validated triple `(g, h, n)` together with the derived branch degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FibrationParams {
    pub g: i64,
    pub h: i64,
    pub n: i64,
    pub r: i64,
}

impl FibrationParams {
    pub fn new(g: i64, h: i64, n: i64) -> Result<Self, ParamError> {
        let r = derive_r(g, h, n)?;
        Ok(FibrationParams { g, h, n, r })
    }

    /// Parameters of a fibration over a ruled surface (`h = 0`).
    pub fn ruled(g: i64, n: i64) -> Result<Self, ParamError> {
        Self::new(g, 0, n)
    }

    /// Recover `g` from `(r, h, n)`: `g = (n-1)r/2 + n(h-1) + 1`.
    pub fn from_branch_degree(r: i64, h: i64, n: i64) -> Result<Self, ParamError> {
        let twice = (n - 1) * r;
        if twice % 2 != 0 {
            return Err(ParamError::InvalidGenus(twice));
        }
        Self::new(twice / 2 + n * (h - 1) + 1, h, n)
    }

    pub fn lambda(&self) -> Result<Rational, ParamError> {
        lambda_lower(self.g, self.h, self.n).map(|b| b.lambda)
    }
}

/// Branch degree `r = 2(g-1-n(h-1))/(n-1)` on a general fiber.
pub fn derive_r(g: i64, h: i64, n: i64) -> Result<i64, ParamError> {
    if n < 2 {
        return Err(ParamError::InvalidOrder(n));
    }
    if g < 2 {
        return Err(ParamError::InvalidGenus(g));
    }
    if h < 0 {
        return Err(ParamError::InvalidQuotientGenus(h));
    }
    let numer = 2 * (g - 1 - n * (h - 1));
    let denom = n - 1;
    if numer % denom != 0 {
        return Err(ParamError::NonIntegralR { numer, denom });
    }
    let r = numer / denom;
    if r <= 0 {
        return Err(ParamError::NonPositiveR(r));
    }
    if r % n != 0 {
        return Err(ParamError::NotMultipleOfN { r, n });
    }
    Ok(r)
}

/// The lower slope bound together with the genus hypothesis flag.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LowerBound {
    pub lambda: Rational,
    /// `Some(ok)` when `h >= 1`: whether `g >= (2n-1)(2hn+n-1)/(n+1)`.
    pub genus_hypothesis: Option<bool>,
    /// Whether `(g, h, n)` yields a positive branch degree `r` in `nZ`.
    pub admissible: bool,
}

/// `g >= (2n-1)(2hn+n-1)/(n+1)`, compared in integers.
pub fn genus_hypothesis(g: i64, h: i64, n: i64) -> bool {
    (n + 1) * g >= (2 * n - 1) * (2 * h * n + n - 1)
}

/// `λ_{g,h,n} = 24(n-1)(g-1) / (2(2n-1)(g-1) - n(n+1)(h-1))`.
///
/// The closed form is evaluated for every `n >= 2`, `g >= 2`, `h >= 0`;
/// whether the triple is realised by an actual branch degree is reported in
/// [`LowerBound::admissible`].
pub fn lambda_lower(g: i64, h: i64, n: i64) -> Result<LowerBound, ParamError> {
    let admissible = match derive_r(g, h, n) {
        Ok(_) => true,
        Err(e @ (ParamError::InvalidOrder(_)
        | ParamError::InvalidGenus(_)
        | ParamError::InvalidQuotientGenus(_))) => return Err(e),
        Err(_) => false,
    };
    let denom = 2 * (2 * n - 1) * (g - 1) - n * (n + 1) * (h - 1);
    let lambda = Rational::checked_new(24 * (n - 1) * (g - 1), denom)
        .ok_or(ParamError::DegenerateLambda { g, h, n })?;
    let genus_hypothesis = (h >= 1).then(|| genus_hypothesis(g, h, n));
    Ok(LowerBound { lambda, genus_hypothesis, admissible })
}

/// Which regime of the upper bound applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum UpperCase {
    /// `n <= r < n(n-1)`
    Small,
    /// `r >= n(n-1)`
    Large,
}

/// Constants entering the upper-bound argument for `h = 0`, `n >= 4`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SlopeConstants {
    pub n: i64,
    pub r: i64,
    pub lambda: Rational,
    pub mu: Rational,
    pub mu_prime: Rational,
    #[cfg_attr(feature = "serde", serde(rename = "A"))]
    pub a: Rational,
    #[cfg_attr(feature = "serde", serde(rename = "B"))]
    pub b: Rational,
    pub delta: i64,
    pub case: UpperCase,
}

impl SlopeConstants {
    /// `12 - μ`, the upper slope bound.
    pub fn upper(&self) -> Rational {
        Rational::from(12) - &self.mu
    }

    /// `-2A + nB - 1`
    pub fn balance(&self) -> Rational {
        -(&self.a * 2) + &self.b * self.n - 1
    }

    /// `(n-2)A - 2B`
    pub fn eta_coefficient(&self) -> Rational {
        &self.a * (self.n - 2) - &self.b * 2
    }

    /// `2(n-2)A - B`
    pub fn kappa_coefficient(&self) -> Rational {
        &self.a * (2 * (self.n - 2)) - &self.b
    }

    /// `-2A + anB`
    pub fn j_coefficient(&self, a: i64) -> Rational {
        -(&self.a * 2) + &self.b * (a * self.n)
    }
}

/// All constants of the upper bound for `(g, 0, n)`.
pub fn slope_constants(g: i64, n: i64) -> Result<SlopeConstants, ParamError> {
    if n == 2 || n == 3 {
        return Err(ParamError::UnsupportedOrder(n));
    }
    let p = FibrationParams::ruled(g, n)?;
    let r = p.r;
    let delta = if r % (2 * n) == 0 { 0 } else { 1 };
    let case = if r < n * (n - 1) { UpperCase::Small } else { UpperCase::Large };
    let mu = match case {
        UpperCase::Small => Rational::checked_new(
            48 * n * n * (r - 1),
            (n - 1) * (n + 1) * (r * r - delta * n * n),
        ),
        UpperCase::Large => Rational::checked_new(
            48 * n * (n - 1) * (r - 1),
            n * (n + 1) * r * r - 8 * (2 * n - 1) * r + 24 * n - delta * n * n * n * (n + 1),
        ),
    }
    .ok_or(ParamError::DegenerateUpper { r, n })?;
    let mu_prime = &mu * Rational::new(n - 1, 12 * (r - 1));
    let a = Rational::from(n - 1) - &mu_prime * Rational::new(r * (2 * n - 1) - 3 * n, n);
    let b = Rational::from(n) - &mu_prime * Rational::new((n + 1) * (r * r - delta * n * n), 4 * n);
    Ok(SlopeConstants { n, r, lambda: p.lambda()?, mu, mu_prime, a, b, delta, case })
}

/// The upper slope bound `12 - μ` for `(g, 0, n)`, `n >= 4`.
pub fn lambda_upper(g: i64, n: i64) -> Result<Rational, ParamError> {
    slope_constants(g, n).map(|c| c.upper())
}
