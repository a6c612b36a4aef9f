//! Build and re-verification of a run.

use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::construction::{run_construction, Stage, StageFunction};
use crate::error::{Error, Result};
use crate::geometry::{CloudTag, PointCloud, BIDISK_SLACK};
use crate::polynomials::ScaledPoly;
use crate::varieties::{limit_set, refine_toward_boundary, sample_variety, LimitSet, RefineOptions, VarietySample};
use crate::verify::{run_suite, SuiteSettings, VerificationReport};

use super::config::RunConfig;
use super::io::{read_cloud, write_cloud};
use super::manifest::{CloudFile, RunManifest, StageRecord, Timings, MANIFEST_FILE, SCHEMA_VERSION};

pub const CLOUD_DIR: &str = "clouds";

/// In-memory result of a build.
#[derive(Debug, Clone)]
pub struct BuildArtifacts {
    pub manifest: RunManifest,
    pub stages: Vec<Stage>,
    pub varieties: Vec<VarietySample>,
    pub limit: LimitSet,
}

impl BuildArtifacts {
    /// 0 when every hard check passes, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.manifest.report.all_hard_pass() {
            0
        } else {
            2
        }
    }
}

fn suite_settings(cfg: &RunConfig) -> SuiteSettings {
    SuiteSettings {
        grid: cfg.grid,
        degree_cap: cfg.degree_cap,
        denom_cap: cfg.denom_cap,
        seed: cfg.seed,
        hull_degree: cfg.hull_degree,
        hull_budget: cfg.hull_budget,
    }
}

fn cloud_path(role: &str, stage: Option<usize>) -> String {
    match stage {
        Some(j) => format!("{CLOUD_DIR}/{}_{j}.csv", role.to_lowercase()),
        None => format!("{CLOUD_DIR}/{}.csv", role.to_lowercase()),
    }
}

fn cloud_entries(stages: &[Stage], varieties: &[VarietySample], limit: &LimitSet) -> Vec<(CloudFile, PointCloud)> {
    let mut out = Vec::new();
    let mut add = |role: &str, stage: Option<usize>, c: &PointCloud| {
        out.push((
            CloudFile {
                role: role.into(),
                stage,
                path: cloud_path(role, stage),
                points: c.len(),
            },
            c.clone(),
        ))
    };
    for s in stages {
        add("K", Some(s.index), &s.k_cloud);
        add("L", Some(s.index), &s.l_witnesses);
        add("M", Some(s.index), &s.m_witnesses);
    }
    for (s, v) in stages.iter().zip(varieties) {
        add("V", Some(s.index), &v.cloud);
    }
    add("limit_V", None, &limit.v);
    add("limit_Y", None, &limit.y);
    out
}

/// Construction, variety sampling, limit selection and verification.
/// Nothing is written.
pub fn build(cfg: &RunConfig) -> Result<BuildArtifacts> {
    cfg.validate()?;
    let t0 = Instant::now();
    let run = run_construction(&cfg.construction()?)?;
    let construction = t0.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let opts = RefineOptions {
        tol: cfg.tol_residual,
        ..RefineOptions::default()
    };
    let varieties: Vec<VarietySample> = run
        .stages
        .iter()
        .map(|s| {
            let raw = sample_variety(&s.function, &cfg.grid, cfg.tol_residual, Some(s.index));
            refine_toward_boundary(&s.function, &raw, &opts)
        })
        .collect();
    let limit = limit_set(&varieties, cfg.target_gap, cfg.delta_bd)?;
    let varieties_time = t1.elapsed().as_secs_f64();

    let t2 = Instant::now();
    let clouds: Vec<PointCloud> = varieties.iter().map(|v| v.cloud.clone()).collect();
    let report = run_suite(&run.stages, &clouds, &limit.v, &limit.y, &suite_settings(cfg))?;
    let verification = t2.elapsed().as_secs_f64();

    let files = cloud_entries(&run.stages, &varieties, &limit).into_iter().map(|(f, _)| f).collect();
    let manifest = RunManifest {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        stages: run.stages.iter().map(StageRecord::from_stage).collect(),
        skipped: run.skipped,
        varieties: varieties.iter().map(VarietySample::diagnostics).collect(),
        limit: limit.summary(),
        files,
        report,
        timings: Timings {
            construction,
            varieties: varieties_time,
            verification,
        },
    };
    Ok(BuildArtifacts {
        manifest,
        stages: run.stages,
        varieties,
        limit,
    })
}

/// Writes the manifest and every cloud under `dir`; returns the manifest
/// path.
pub fn write_artifacts(art: &BuildArtifacts, dir: &Path) -> Result<PathBuf> {
    let clouds = dir.join(CLOUD_DIR);
    std::fs::create_dir_all(&clouds).map_err(|e| Error::io(&clouds, e))?;
    for (f, c) in cloud_entries(&art.stages, &art.varieties, &art.limit) {
        write_cloud(&c, &dir.join(&f.path))?;
    }
    let path = dir.join(MANIFEST_FILE);
    art.manifest.save(&path)?;
    Ok(path)
}

/// [`build`] followed by [`write_artifacts`] into the configured output
/// directory.
pub fn build_and_write(cfg: &RunConfig) -> Result<(BuildArtifacts, PathBuf)> {
    let art = build(cfg)?;
    let path = write_artifacts(&art, &cfg.output_dir)?;
    Ok((art, path))
}

/// Persisted run, reloaded.
#[derive(Debug, Clone)]
pub struct LoadedRun {
    pub manifest: RunManifest,
    pub stages: Vec<Stage>,
    pub varieties: Vec<PointCloud>,
    pub v: PointCloud,
    pub y: PointCloud,
}

fn load_file(m: &RunManifest, dir: &Path, role: &str, stage: Option<usize>, tag: CloudTag) -> Result<PointCloud> {
    let f = m
        .file(role, stage)
        .ok_or_else(|| Error::parse("manifest", format!("no {role} cloud listed for stage {stage:?}")))?;
    read_cloud(&dir.join(&f.path), tag, BIDISK_SLACK)
}

/// Reads a manifest and its clouds and rebuilds the stage functions from
/// the recorded pairs and exponents.
pub fn load_run(manifest_path: &Path) -> Result<LoadedRun> {
    let manifest = RunManifest::load(manifest_path)?;
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let mut stages: Vec<Stage> = Vec::with_capacity(manifest.stages.len());
    let mut varieties = Vec::with_capacity(manifest.stages.len());
    for r in &manifest.stages {
        let g = ScaledPoly::normalize(&r.poly, r.a)?;
        let function = match (stages.last(), r.exponent) {
            (None, _) => StageFunction::base(g.clone()),
            (Some(prev), Some(e)) => prev.function.compose(e.n, g.clone()),
            (Some(_), None) => {
                return Err(Error::parse("manifest", format!("stage {} has no exponent", r.index)));
            }
        };
        let j = Some(r.index);
        stages.push(Stage {
            index: r.index,
            source: r.source,
            poly: r.poly.clone(),
            a: r.a,
            g,
            exponent: r.exponent,
            function,
            k_cloud: load_file(&manifest, dir, "K", j, CloudTag::K)?,
            l_witnesses: load_file(&manifest, dir, "L", j, CloudTag::LWitness)?,
            m_witnesses: load_file(&manifest, dir, "M", j, CloudTag::MWitness)?,
            margins: r.margins,
        });
        varieties.push(load_file(&manifest, dir, "V", j, CloudTag::V)?);
    }
    let v = load_file(&manifest, dir, "limit_V", None, CloudTag::V)?;
    let y = load_file(&manifest, dir, "limit_Y", None, CloudTag::Y)?;
    Ok(LoadedRun {
        manifest,
        stages,
        varieties,
        v,
        y,
    })
}

#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub report: VerificationReport,
    /// Records whose recomputed value differs from the manifest, as
    /// `name (stage)`; a different record count is reported as `record count`.
    pub mismatches: Vec<String>,
}

impl VerifyOutcome {
    pub fn reproduces_build(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn exit_code(&self) -> i32 {
        if self.reproduces_build() && self.report.all_hard_pass() {
            0
        } else {
            2
        }
    }
}

/// Re-runs the verification suite on the persisted artifacts and compares
/// the result with the build-time report.
pub fn verify_manifest(manifest_path: &Path) -> Result<VerifyOutcome> {
    let run = load_run(manifest_path)?;
    let report = run_suite(&run.stages, &run.varieties, &run.v, &run.y, &suite_settings(&run.manifest.config))?;
    let old = &run.manifest.report;
    let mut mismatches = Vec::new();
    if old.records.len() != report.records.len() {
        mismatches.push("record count".to_string());
    }
    for (a, b) in old.records.iter().zip(&report.records) {
        let same = serde_json::to_string(a).ok() == serde_json::to_string(b).ok();
        if !same {
            let stage = a.stage.map(|s| s.to_string()).unwrap_or_else(|| "-".into());
            mismatches.push(format!("{} ({stage})", a.name));
        }
    }
    Ok(VerifyOutcome { report, mismatches })
}
