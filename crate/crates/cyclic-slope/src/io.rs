//! JSON input files.
//!
//! A model file describes a fibration over `P^1` and the singular fibers of
//! its branch curve:
//!
//! ```json
//! {
//!   "n": 2, "g": 2,
//!   "M": "2", "generic_alpha0": 14,
//!   "germs": [
//!     { "label": "p", "nodes": [
//!         { "id": 1, "parent": null, "mult": 3 },
//!         { "id": 2, "parent": 1, "mult": 2 }
//!     ] }
//!   ]
//! }
//! ```
//!
//! `M` and `generic_alpha0` are optional. With neither, the smallest
//! consistent generic ramification is chosen; with one, the other is
//! derived; with both, they are checked against each other.

use std::path::Path;

use cyclic_slope_core::cluster::{ClusterNode, FiberGerm, HorizontalContact};
use cyclic_slope_core::invariants::{GlobalModel, LabeledGerm};
use cyclic_slope_core::{FibrationParams, Rational};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GermEntry {
    pub label: String,
    #[serde(default)]
    pub gamma_in_branch: bool,
    #[serde(default)]
    pub nodes: Vec<ClusterNode>,
    #[serde(default)]
    pub horizontal_contacts: Vec<HorizontalContact>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub n: i64,
    pub g: i64,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generic_alpha0: Option<i64>,
    #[serde(default)]
    pub germs: Vec<GermEntry>,
}

impl ModelFile {
    pub fn params(&self) -> Result<FibrationParams, CliError> {
        Ok(FibrationParams::ruled(self.g, self.n)?)
    }

    pub fn labeled_germs(&self) -> Result<Vec<LabeledGerm>, CliError> {
        let p = self.params()?;
        Ok(self
            .germs
            .iter()
            .map(|e| LabeledGerm {
                label: e.label.clone(),
                germ: FiberGerm {
                    n: p.n,
                    r: p.r,
                    gamma_in_branch: e.gamma_in_branch,
                    nodes: e.nodes.clone(),
                    horizontal_contacts: e.horizontal_contacts.clone(),
                },
            })
            .collect())
    }

    /// Build the model without evaluating it.
    pub fn to_model(&self) -> Result<GlobalModel, CliError> {
        let p = self.params()?;
        let germs = self.labeled_germs()?;
        match (&self.m, self.generic_alpha0) {
            (None, None) => Ok(GlobalModel::from_germs(p, germs)?),
            (None, Some(a)) => Ok(GlobalModel::with_generic(p, germs, a)?),
            (Some(m), Some(a)) => Ok(GlobalModel { params: p, m: m.clone(), germs, generic_alpha0: a }),
            (Some(m), None) => {
                let a = GlobalModel::generic_for(&p, &germs, m)?
                    .ok_or_else(|| CliError::Invalid(format!("M = {m} needs a non-integral generic α_0")))?;
                Ok(GlobalModel { params: p, m: m.clone(), germs, generic_alpha0: a })
            }
        }
    }

    pub fn from_model(model: &GlobalModel) -> Self {
        ModelFile {
            n: model.params.n,
            g: model.params.g,
            m: Some(model.m.clone()),
            generic_alpha0: Some(model.generic_alpha0),
            germs: model
                .germs
                .iter()
                .map(|lg| GermEntry {
                    label: lg.label.clone(),
                    gamma_in_branch: lg.germ.gamma_in_branch,
                    nodes: lg.germ.nodes.clone(),
                    horizontal_contacts: lg.germ.horizontal_contacts.clone(),
                })
                .collect(),
        }
    }
}

/// Parse a JSON document, reporting the path of the offending value.
pub fn parse_json<T: DeserializeOwned>(text: &str, path: &Path) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        pointer: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    parse_json(&text, path)
}

pub fn read_model(path: &Path) -> Result<ModelFile, CliError> {
    read_json(path)
}

pub fn read_germ(path: &Path) -> Result<FiberGerm, CliError> {
    read_json(path)
}
