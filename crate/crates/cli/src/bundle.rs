//! The JSON result document written by every subcommand.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use specbox_core::certificate::CertificateGrid;
use specbox_core::{Complex64, Rect, Region};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// Encloses the whole spectrum.
    All,
    /// Encloses only the non-real spectrum.
    NonReal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaggedRegion {
    pub tag: String,
    pub description: String,
    pub scope: Scope,
    pub region: Region,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Inside,
    Boundary,
    Outside,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipRow {
    pub eigenvalue: Complex64,
    pub regions: BTreeMap<String, Membership>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridLayers {
    pub rect: Rect,
    pub nx: usize,
    pub ny: usize,
    /// Row-major over `y`, then `x`; `null` on the real axis.
    pub in_best: Vec<Option<bool>>,
    pub in_neumann: Vec<Option<bool>>,
    pub resolvent_bound: Vec<Option<f64>>,
}

impl From<&CertificateGrid> for GridLayers {
    fn from(g: &CertificateGrid) -> Self {
        GridLayers {
            rect: g.rect,
            nx: g.nx,
            ny: g.ny,
            in_best: g.best_mask(),
            in_neumann: g.neumann_mask(),
            resolvent_bound: g.bound_layer(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cloud {
    pub tag: String,
    pub points: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultBundle {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: Option<u64>,
    #[serde(default)]
    pub regions: Vec<TaggedRegion>,
    #[serde(default)]
    pub eigenvalues: Vec<Complex64>,
    #[serde(default)]
    pub membership: Vec<MembershipRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridLayers>,
    #[serde(default)]
    pub clouds: Vec<Cloud>,
    #[serde(default)]
    pub metadata: BTreeMap<String, serde_json::Value>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl ResultBundle {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        ResultBundle {
            schema_version: SCHEMA_VERSION,
            tool: "specbox".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed,
            regions: vec![],
            eigenvalues: vec![],
            membership: vec![],
            grid: None,
            clouds: vec![],
            metadata: BTreeMap::new(),
            warnings: vec![],
        }
    }

    pub fn push_region(&mut self, tag: &str, description: &str, scope: Scope, region: Region) {
        self.regions.push(TaggedRegion {
            tag: tag.into(),
            description: description.into(),
            scope,
            region,
        });
    }

    pub fn meta<T: Serialize>(&mut self, key: &str, value: T) {
        let v = serde_json::to_value(value).expect("metadata serializes");
        self.metadata.insert(key.into(), v);
    }

    pub fn region(&self, tag: &str) -> Option<&TaggedRegion> {
        self.regions.iter().find(|r| r.tag == tag)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("bundle serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let b: ResultBundle = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        if b.schema_version != SCHEMA_VERSION {
            return Err(CliError::Validation(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                b.schema_version
            )));
        }
        Ok(b)
    }
}

/// `Inside` when a ring of radius `tol` around `z` stays in the region,
/// `Boundary` when `z` is within `tol` of it otherwise, else `Outside`.
/// Points of zero-area parts (real intervals) are always `Boundary`.
pub fn classify(region: &Region, z: Complex64, tol: f64) -> Membership {
    if !region.contains_within(z, tol) {
        return Membership::Outside;
    }
    if !region.contains(z) {
        return Membership::Boundary;
    }
    let ring = (0..16).all(|k| {
        let t = std::f64::consts::PI * k as f64 / 8.0;
        region.contains(z + Complex64::from_polar(tol, t))
    });
    if ring {
        Membership::Inside
    } else {
        Membership::Boundary
    }
}
