//! Scenario files: a surface family, a collapse schedule, basepoints, δ-pairs,
//! fields and optional expectations.

use collapse_core::gh::PointTag;
use collapse_core::surfaces::FamilySpec;
use collapse_core::topology::is_prime;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::RunError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub family: FamilySpec,
    /// Collapse parameters standing in for the index i, in order.
    pub schedule: Vec<f64>,
    /// If set, the mesh resolution is this multiple of the collapse parameter.
    #[serde(default)]
    pub resolution_ratio: Option<f64>,
    /// Limit parameters (vertex indices when the limit is the surface itself).
    pub basepoints: Vec<f64>,
    /// The verified δ-grid.
    pub delta_pairs: Vec<(f64, f64)>,
    /// Pairs obeying the proofs' margins; reported separately, never verified.
    #[serde(default)]
    pub paper_safe_delta_pairs: Vec<(f64, f64)>,
    #[serde(default = "default_fields")]
    pub fields: Vec<u64>,
    #[serde(default)]
    pub expect: Option<Expectation>,
    /// Directory for reports, relative to the working directory.
    #[serde(default)]
    pub out_dir: Option<String>,
}

fn default_fields() -> Vec<u64> {
    vec![2, 3]
}

/// Expected values on conclusive cells.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    #[serde(default)]
    pub h: Vec<HRule>,
    /// h must equal the homology of the whole mesh (point collapse).
    #[serde(default)]
    pub h_equals_betti: bool,
    /// Expected ∫F dχ; defaults to χ of the mesh.
    #[serde(default)]
    pub chi: Option<i64>,
}

/// Expected h at the basepoints selected by tag and/or value, optionally for
/// one field only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HRule {
    #[serde(default)]
    pub tag: Option<PointTag>,
    #[serde(default)]
    pub x: Option<f64>,
    #[serde(default)]
    pub field_p: Option<u64>,
    pub h: [usize; 3],
}

impl HRule {
    pub fn applies(&self, tag: PointTag, x: f64, p: u64) -> bool {
        self.tag.is_none_or(|t| t == tag)
            && self.x.is_none_or(|y| (x - y).abs() <= 1e-12)
            && self.field_p.is_none_or(|q| q == p)
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, RunError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| RunError::Config(format!("scenario: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), RunError> {
        let bad = |m: String| Err(RunError::Config(format!("scenario {}: {m}", self.name)));
        if self.name.is_empty() || self.name.contains(['/', '\\', ',']) {
            return bad("name must be nonempty without '/', '\\' or ','".into());
        }
        if self.schedule.is_empty() || self.schedule.iter().any(|&p| !(p > 0.0)) {
            return bad("schedule must be a nonempty list of positive parameters".into());
        }
        if self.resolution_ratio.is_some_and(|r| !(r > 0.0)) {
            return bad("resolution_ratio must be positive".into());
        }
        if self.basepoints.is_empty() || self.basepoints.iter().any(|x| !x.is_finite()) {
            return bad("basepoints must be a nonempty list of numbers".into());
        }
        if self.delta_pairs.is_empty() {
            return bad("delta_pairs must be nonempty".into());
        }
        for &(d1, d2) in self.delta_pairs.iter().chain(&self.paper_safe_delta_pairs) {
            if !(d1 > 0.0 && d1 < d2) {
                return bad(format!("δ-pair ({d1}, {d2}) must satisfy 0 < δ₁ < δ₂"));
            }
        }
        if self.fields.is_empty() {
            return bad("fields must be nonempty".into());
        }
        if let Some(p) = self.fields.iter().find(|&&p| !is_prime(p)) {
            return bad(format!("field size {p} is not a prime"));
        }
        Ok(())
    }

    /// The family at the i-th schedule entry.
    pub fn family_at(&self, param: f64) -> FamilySpec {
        let f = self.family.with_collapse_param(param);
        match self.resolution_ratio {
            Some(r) => f.with_resolution(r * param),
            None => f,
        }
    }
}
