//! JSON file formats for spaces, functions, molecules and certificates.
//!
//! ```json
//! {"points": ["e","a","b"], "base": "e", "dist": [[0,1,1],[1,0,2],[1,2,0]]}
//! {"space": "s.json", "values": {"e": 0, "a": 3.0, "b": -1.0}}
//! {"space": "s.json", "coeffs": {"a": 1.0, "b": -1.0}}
//! ```
//!
//! Distance matrices are always full; symmetry is re-verified on load.
//! Functions must give a value for every point; molecules may omit points,
//! which then carry coefficient 0.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::free_space::{CertifiedNorm, Molecule};
use crate::lip::LipFunction;
use crate::metric::MetricSpace;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub points: Vec<String>,
    #[serde(default)]
    pub base: Option<String>,
    pub dist: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionFile {
    #[serde(default)]
    pub space: String,
    pub values: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoleculeFile {
    #[serde(default)]
    pub space: String,
    pub coeffs: BTreeMap<String, f64>,
}

/// Output of `aenorm --certify`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateFile {
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
    pub passed: bool,
    pub failed_checks: Vec<String>,
    pub witness: BTreeMap<String, f64>,
    /// `(from, to, flow)` for every nonzero flow.
    pub plan: Vec<(String, String, f64)>,
}

impl SpaceFile {
    pub fn from_space<S: Scalar>(space: &MetricSpace<S>) -> Self {
        Self {
            points: space.ids().to_vec(),
            base: space.base().map(|b| space.id(b).to_string()),
            dist: space
                .rows()
                .iter()
                .map(|r| r.iter().map(Scalar::as_f64).collect())
                .collect(),
        }
    }

    pub fn into_space(self) -> Result<MetricSpace> {
        let base = match &self.base {
            None => None,
            Some(b) => Some(
                self.points
                    .iter()
                    .position(|p| p == b)
                    .ok_or_else(|| Error::UnknownPoint(b.clone()))?,
            ),
        };
        MetricSpace::new(self.points, self.dist, base)
    }
}

impl FunctionFile {
    pub fn from_function<S: Scalar>(f: &LipFunction<S>, space_ref: &str) -> Self {
        let values = f
            .space()
            .ids()
            .iter()
            .zip(f.values())
            .map(|(id, v)| (id.clone(), v.as_f64()))
            .collect();
        Self {
            space: space_ref.to_string(),
            values,
        }
    }

    pub fn into_function(self, space: &Arc<MetricSpace>) -> Result<LipFunction> {
        if let Some(unknown) = self.values.keys().find(|k| space.index_of(k).is_none()) {
            return Err(Error::UnknownPoint(unknown.clone()));
        }
        let values = space
            .ids()
            .iter()
            .map(|id| {
                self.values
                    .get(id)
                    .copied()
                    .ok_or_else(|| Error::MissingPoint(id.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        LipFunction::new(space.clone(), values)
    }
}

impl MoleculeFile {
    pub fn from_molecule<S: Scalar>(m: &Molecule<S>, space_ref: &str) -> Self {
        let coeffs = m
            .space()
            .ids()
            .iter()
            .zip(m.coeffs())
            .filter(|(_, c)| !c.is_zero())
            .map(|(id, c)| (id.clone(), c.as_f64()))
            .collect();
        Self {
            space: space_ref.to_string(),
            coeffs,
        }
    }

    pub fn into_molecule(self, space: &Arc<MetricSpace>) -> Result<Molecule> {
        let mut coeffs = vec![0.0; space.len()];
        for (id, c) in self.coeffs {
            let i = space.index_of(&id).ok_or(Error::UnknownPoint(id))?;
            coeffs[i] = c;
        }
        Molecule::new(space.clone(), coeffs)
    }
}

impl CertificateFile {
    pub fn from_norm<S: Scalar>(norm: &CertifiedNorm<S>) -> Self {
        let space = norm.certificate.witness.space();
        let witness = space
            .ids()
            .iter()
            .zip(norm.certificate.witness.values())
            .map(|(id, v)| (id.clone(), v.as_f64()))
            .collect();
        let plan = norm
            .plan
            .triples()
            .into_iter()
            .map(|(p, q, f)| (space.id(p).to_string(), space.id(q).to_string(), f.as_f64()))
            .collect();
        let failed_checks = norm
            .report
            .failures
            .iter()
            .map(|c| {
                serde_json::to_value(c)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default()
            })
            .collect();
        Self {
            primal: norm.report.primal,
            dual: norm.report.dual,
            gap: norm.report.gap,
            passed: norm.report.passed(),
            failed_checks,
            witness,
            plan,
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn load_space(path: &Path) -> Result<MetricSpace> {
    read_json::<SpaceFile>(path)?.into_space()
}

pub fn load_function(path: &Path, space: &Arc<MetricSpace>) -> Result<LipFunction> {
    read_json::<FunctionFile>(path)?.into_function(space)
}

pub fn load_molecule(path: &Path, space: &Arc<MetricSpace>) -> Result<Molecule> {
    read_json::<MoleculeFile>(path)?.into_molecule(space)
}
