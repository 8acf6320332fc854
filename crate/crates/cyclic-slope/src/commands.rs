//! The subcommands. Each returns a JSON report and an exit code.

use std::io::Write;
use std::path::Path;

use cyclic_slope_core::bounds::{lower_bound_certificate, upper_bound_certificate, LowerCertificate, SurfaceClassData, UpperCertificate};
use cyclic_slope_core::cluster::{validate_germ, FiberGerm, Violation};
use cyclic_slope_core::examples::{
    enumerate_germs, enumerate_resolvable, enumerate_standard, product_example, EnumerationBudget, ProductExample,
    ProductExampleParams,
};
use cyclic_slope_core::invariants::{horikawa_index, invariant_report, local_signature, InvariantReport};
use cyclic_slope_core::resolution::{
    euler_local, host_reports, jp_bounds, resolve_germ, vertical_ledger, GermIndices, HostReport, JpBounds, ResolvedGerm,
    VerticalLedger,
};
use cyclic_slope_core::{lambda_lower, slope_constants, FibrationParams, LowerBound, Rational, SlopeConstants};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;
use crate::io::{read_germ, read_model, ModelFile};
use crate::suite::{self, SuiteConfig, SuiteReport};

pub struct Output {
    pub report: Value,
    pub exit: i32,
}

fn ok<T: Serialize>(v: &T) -> Result<Output, CliError> {
    json(v, 0)
}

fn json<T: Serialize>(v: &T, exit: i32) -> Result<Output, CliError> {
    let report = serde_json::to_value(v).map_err(|e| CliError::Identity(format!("report serialization: {e}")))?;
    Ok(Output { report, exit })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GermCheck {
    pub label: String,
    pub violations: Vec<Violation>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub valid: bool,
    pub g: i64,
    pub n: i64,
    pub r: Option<i64>,
    #[serde(rename = "M")]
    pub m: Option<Rational>,
    pub generic_alpha0: Option<i64>,
    pub germs: Vec<GermCheck>,
    pub error: Option<String>,
}

pub fn validate(path: &Path) -> Result<Output, CliError> {
    let file = read_model(path)?;
    let mut rep = ValidateReport {
        valid: false,
        g: file.g,
        n: file.n,
        r: None,
        m: None,
        generic_alpha0: None,
        germs: Vec::new(),
        error: None,
    };
    let p = match file.params() {
        Ok(p) => p,
        Err(e) => {
            rep.error = Some(e.to_string());
            return json(&rep, 1);
        }
    };
    rep.r = Some(p.r);
    for lg in file.labeled_germs()? {
        let violations = validate_germ(&lg.germ);
        let error = if violations.is_empty() { resolve_germ(&lg.germ).err().map(|e| e.to_string()) } else { None };
        rep.germs.push(GermCheck { label: lg.label, violations, error });
    }
    let germs_ok = rep.germs.iter().all(|c| c.violations.is_empty() && c.error.is_none());
    let model = file.to_model().and_then(|m| {
        m.evaluate()?;
        Ok(m)
    });
    match model {
        Ok(m) => {
            rep.m = Some(m.m);
            rep.generic_alpha0 = Some(m.generic_alpha0);
        }
        Err(CliError::Identity(e)) => return Err(CliError::Identity(e)),
        Err(e) => rep.error = Some(e.to_string()),
    }
    rep.valid = germs_ok && rep.error.is_none();
    let exit = if rep.valid { 0 } else { 1 };
    json(&rep, exit)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsOutput {
    pub g: i64,
    pub n: i64,
    pub r: i64,
    #[serde(rename = "M")]
    pub m: Rational,
    pub generic_alpha0: i64,
    #[serde(flatten)]
    pub report: InvariantReport,
    pub upper: Option<UpperCertificate>,
}

pub fn invariants(path: &Path) -> Result<Output, CliError> {
    let model = read_model(path)?.to_model()?;
    let report = invariant_report(&model)?;
    let p = model.params;
    let upper = if p.n >= 4 && p.r != p.n { Some(upper_bound_certificate(&model)?) } else { None };
    ok(&InvariantsOutput { g: p.g, n: p.n, r: p.r, m: model.m.clone(), generic_alpha0: model.generic_alpha0, report, upper })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolveOutput {
    pub germ: FiberGerm,
    pub indices: GermIndices,
    pub resolved: ResolvedGerm,
    pub euler_local: i64,
    pub ind: Rational,
    pub local_signature: Rational,
    pub jp_bounds: JpBounds,
    pub hosts: Vec<HostReport>,
    pub vertical: VerticalLedger,
}

pub fn resolve_output(germ: FiberGerm) -> Result<ResolveOutput, CliError> {
    let violations = validate_germ(&germ);
    if !violations.is_empty() {
        return Err(CliError::Invalid(format!("germ fails validation: {violations:?}")));
    }
    let rg = resolve_germ(&germ)?;
    let idx = rg.indices();
    let e = euler_local(&rg)?;
    if e != rg.euler_by_indices() {
        return Err(CliError::Identity(format!("local Euler number {e} differs from index formula {}", rg.euler_by_indices())));
    }
    let jp = jp_bounds(&rg);
    if !jp.all() {
        return Err(CliError::Identity(format!("j/p bounds fail: {jp:?}")));
    }
    let hosts = host_reports(&germ, &rg)?;
    if let Some(h) = hosts.iter().find(|h| !h.ok()) {
        return Err(CliError::Identity(format!("host identities fail on {:?}", h.curve)));
    }
    Ok(ResolveOutput {
        ind: horikawa_index(rg.n, rg.r, &idx),
        local_signature: local_signature(rg.n, rg.r, &idx),
        vertical: vertical_ledger(&germ, &rg),
        germ,
        indices: idx,
        euler_local: e,
        jp_bounds: jp,
        hosts,
        resolved: rg,
    })
}

pub fn resolve(path: &Path) -> Result<Output, CliError> {
    ok(&resolve_output(read_germ(path)?)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsOutput {
    pub g: i64,
    pub h: i64,
    pub n: i64,
    pub r: Option<i64>,
    pub lower: LowerBound,
    pub upper: Option<Rational>,
    pub constants: Option<SlopeConstants>,
    pub upper_unavailable: Option<String>,
}

pub fn bounds_output(g: i64, h: i64, n: i64) -> Result<BoundsOutput, CliError> {
    let lower = lambda_lower(g, h, n)?;
    let r = FibrationParams::new(g, h, n).ok().map(|p| p.r);
    let (constants, upper_unavailable) = if h != 0 {
        (None, Some("the upper bound is stated for h = 0 only".to_string()))
    } else {
        match slope_constants(g, n) {
            Ok(c) => (Some(c), None),
            Err(e) => (None, Some(e.to_string())),
        }
    };
    let upper = constants.as_ref().map(SlopeConstants::upper);
    Ok(BoundsOutput { g, h, n, r, lower, upper, constants, upper_unavailable })
}

pub fn bounds(g: i64, h: i64, n: i64) -> Result<Output, CliError> {
    ok(&bounds_output(g, h, n)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharpOutput {
    pub params: ProductExampleParams,
    pub example: ProductExample,
    pub certificate: LowerCertificate,
}

pub fn sharp_example(params: ProductExampleParams) -> Result<Output, CliError> {
    let example = product_example(params)?;
    let d = SurfaceClassData::product(params.n, params.h, params.big_n, params.big_m);
    let certificate = lower_bound_certificate(&d, &[], 0)?;
    if certificate.kf2 != example.kf2 || certificate.chif != example.chif {
        return Err(CliError::Identity("certificate and closed forms disagree".into()));
    }
    ok(&SharpOutput { params, example, certificate })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerateMode {
    Valid,
    Resolvable,
    Standard,
}

/// Stream germs as NDJSON, one per line. Returns the number written.
pub fn enumerate(
    n: i64,
    r: i64,
    budget: EnumerationBudget,
    mode: EnumerateMode,
    max_contact: i64,
    out: &mut dyn Write,
) -> Result<usize, CliError> {
    if n < 2 || r <= 0 || r % n != 0 {
        return Err(CliError::Invalid(format!("need n >= 2 and r a positive multiple of n, got n={n} r={r}")));
    }
    let germs = match mode {
        EnumerateMode::Valid => enumerate_germs(n, r, budget),
        EnumerateMode::Resolvable => enumerate_resolvable(n, r, budget, max_contact),
        EnumerateMode::Standard => enumerate_standard(n, r, budget, max_contact),
    };
    for g in &germs {
        let line = serde_json::to_string(g).map_err(|e| CliError::Identity(e.to_string()))?;
        writeln!(out, "{line}").map_err(CliError::Write)?;
    }
    Ok(germs.len())
}

pub fn verify_suite(config: &SuiteConfig) -> Result<Output, CliError> {
    let report: SuiteReport = suite::run(config);
    let exit = if report.passed { 0 } else { 2 };
    json(&report, exit)
}

/// Re-serialize a model file as the fully specified form.
pub fn normalized_model(file: &ModelFile) -> Result<ModelFile, CliError> {
    Ok(ModelFile::from_model(&file.to_model()?))
}
