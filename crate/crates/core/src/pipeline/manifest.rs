use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::construction::{ExponentChoice, PairSource, SkippedPair, Stage, StageMargins};
use crate::error::{Error, Result};
use crate::polynomials::BiPoly;
use crate::varieties::{LimitSummary, VarietyDiagnostics};
use crate::verify::VerificationReport;

use super::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub index: usize,
    pub source: PairSource,
    pub poly: BiPoly,
    pub a: Complex64,
    pub exponent: Option<ExponentChoice>,
    pub margins: StageMargins,
    pub k_points: usize,
    pub l_witnesses: usize,
    pub m_witnesses: usize,
}

impl StageRecord {
    pub fn from_stage(s: &Stage) -> Self {
        StageRecord {
            index: s.index,
            source: s.source,
            poly: s.poly.clone(),
            a: s.a,
            exponent: s.exponent,
            margins: s.margins,
            k_points: s.k_cloud.len(),
            l_witnesses: s.l_witnesses.len(),
            m_witnesses: s.m_witnesses.len(),
        }
    }
}

/// A persisted cloud, relative to the manifest directory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CloudFile {
    /// `K`, `L`, `M`, `V` (per stage), `limit_V` or `limit_Y`.
    pub role: String,
    pub stage: Option<usize>,
    pub path: String,
    pub points: usize,
}

/// Wall-clock seconds per phase; the only run-dependent part of a manifest.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub construction: f64,
    pub varieties: f64,
    pub verification: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: RunConfig,
    pub stages: Vec<StageRecord>,
    pub skipped: Vec<SkippedPair>,
    pub varieties: Vec<VarietyDiagnostics>,
    pub limit: LimitSummary,
    pub files: Vec<CloudFile>,
    pub report: VerificationReport,
    pub timings: Timings,
}

impl RunManifest {
    /// The manifest with timings zeroed, for comparing runs.
    pub fn without_timings(&self) -> Self {
        RunManifest {
            timings: Timings::default(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: RunManifest = serde_json::from_str(text).map_err(|e| Error::parse("manifest", e))?;
        if m.schema_version != SCHEMA_VERSION {
            return Err(Error::parse(
                "manifest",
                format!("schema version {} (expected {SCHEMA_VERSION})", m.schema_version),
            ));
        }
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn file(&self, role: &str, stage: Option<usize>) -> Option<&CloudFile> {
        self.files.iter().find(|f| f.role == role && f.stage == stage)
    }
}
