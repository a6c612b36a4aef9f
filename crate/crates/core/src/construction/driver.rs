//! The stage loop: enumerate pairs, extract level sets, pick exponents and
//! record the per-stage margins.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{sample_bidisk, C2Point, CloudTag, GridSpec, PointCloud, BIDISK_SLACK};
use crate::polynomials::{zeta_sequence, BiPoly, FamilyEnumerator, ScaledPoly};

use super::exponent::{exponent_log_bound, select_exponent, ExponentChoice};
use super::level_set::extract_level_set;
use super::region::{label_for, RegionLabel, REGION_TOL};
use super::stage_fn::{StageFunction, StageValue};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionConfig {
    pub stages: usize,
    pub grid: GridSpec,
    /// Bound on `|F_j|` for a polished level-set point to be kept.
    pub tol_level: f64,
    /// Newton residual target.
    pub tol_residual: f64,
    pub n_safety: f64,
    pub max_n: u32,
    pub degree_cap: u32,
    pub denom_cap: i64,
    /// Pairs tried before the enumeration; `a` need not be irrational.
    pub injected_pairs: Vec<(BiPoly, Complex64)>,
    /// Enumerated pairs examined before giving up.
    pub max_pairs: usize,
}

impl Default for ConstructionConfig {
    fn default() -> Self {
        ConstructionConfig {
            stages: 5,
            grid: GridSpec::new(6, 8),
            tol_level: 1e-8,
            tol_residual: 1e-10,
            n_safety: 2.0,
            max_n: 1_000_000,
            degree_cap: 3,
            denom_cap: 4,
            injected_pairs: Vec::new(),
            max_pairs: 10_000,
        }
    }
}

impl ConstructionConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.stages == 0 {
            return bad("stages must be at least 1".into());
        }
        for (name, v) in [("tol_level", self.tol_level), ("tol_residual", self.tol_residual)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.n_safety >= 1.0 && self.n_safety.is_finite()) {
            return bad(format!("n_safety must be >= 1, got {}", self.n_safety));
        }
        if self.max_n == 0 || self.degree_cap == 0 || self.denom_cap < 1 {
            return bad("max_n, degree_cap and denom_cap must be positive".into());
        }
        self.grid.validate(usize::MAX)
    }
}

/// Where a stage's pair came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairSource {
    Injected { slot: usize },
    Enumerated { zeta_index: usize, family_index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StageMargins {
    /// `|F_j(0,0) - 1|`.
    pub origin_error: f64,
    /// `max |F_j|` over the kept level-set samples.
    pub k_max_abs: f64,
    /// Polished level-set samples dropped because `|F_j|` exceeded the bound.
    pub k_dropped: usize,
    /// `max |F_j|` over the previous stage's L-witnesses together with the
    /// level-set samples of this stage; `None` at the first stage.
    pub prev_bound: Option<f64>,
    /// Grid points where `Re F_j` could not be resolved.
    pub unresolved: usize,
}

#[derive(Debug, Clone)]
pub struct Stage {
    pub index: usize,
    pub source: PairSource,
    pub poly: BiPoly,
    pub a: Complex64,
    pub g: ScaledPoly,
    pub exponent: Option<ExponentChoice>,
    pub function: StageFunction,
    pub k_cloud: PointCloud,
    /// Grid points classified L under `F_j`, plus every level-set sample so
    /// far that is classified L under `F_j`.
    pub l_witnesses: PointCloud,
    /// Grid points classified M under `F_j`.
    pub m_witnesses: PointCloud,
    pub margins: StageMargins,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedPair {
    pub source: PairSource,
    pub poly: String,
    pub a: Complex64,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct Construction {
    pub stages: Vec<Stage>,
    pub skipped: Vec<SkippedPair>,
    pub grid: PointCloud,
}

/// Cantor diagonal over (ζ index, family index).
fn diagonal() -> impl Iterator<Item = (usize, usize)> {
    (0usize..).flat_map(|d| (0..=d).map(move |i| (i, d - i)))
}

struct Sources {
    family: FamilyEnumerator,
    members: Vec<BiPoly>,
    exhausted: bool,
    zetas: Vec<Complex64>,
}

impl Sources {
    fn member(&mut self, k: usize) -> Option<BiPoly> {
        while self.members.len() <= k && !self.exhausted {
            match self.family.next() {
                Some(p) => self.members.push(p),
                None => self.exhausted = true,
            }
        }
        self.members.get(k).cloned()
    }

    fn zeta(&mut self, i: usize) -> Complex64 {
        if i >= self.zetas.len() {
            self.zetas = zeta_sequence((2 * i).max(64)).complex_values();
        }
        self.zetas[i]
    }
}

fn candidate_pairs(cfg: &ConstructionConfig) -> impl Iterator<Item = (PairSource, BiPoly, Complex64)> + '_ {
    let injected = cfg
        .injected_pairs
        .iter()
        .enumerate()
        .map(|(slot, (p, a))| (PairSource::Injected { slot }, p.clone(), *a));
    let mut src = Sources {
        family: FamilyEnumerator::new(cfg.degree_cap, cfg.denom_cap),
        members: Vec::new(),
        exhausted: false,
        zetas: Vec::new(),
    };
    let enumerated = diagonal()
        .take(cfg.max_pairs)
        .filter_map(move |(i, k)| {
            let p = src.member(k)?;
            let a = src.zeta(i);
            Some((
                PairSource::Enumerated {
                    zeta_index: i,
                    family_index: k,
                },
                p,
                a,
            ))
        });
    injected.chain(enumerated)
}

fn values_on(f: &StageFunction, cloud: &PointCloud) -> Vec<StageValue> {
    cloud.points().par_iter().map(|p| f.eval_value(p)).collect()
}

fn max_abs(values: &[StageValue]) -> Option<f64> {
    let mut m = f64::NEG_INFINITY;
    for v in values {
        m = m.max(v.ln_abs()?);
    }
    Some(m.exp())
}

fn witnesses(
    f: &StageFunction,
    grid: &PointCloud,
    k_history: &[&PointCloud],
    stage: usize,
) -> Result<(PointCloud, PointCloud, usize)> {
    let labels: Vec<RegionLabel> = values_on(f, grid).iter().map(|v| label_for(v.re(), REGION_TOL)).collect();
    let unresolved = labels.iter().filter(|l| **l == RegionLabel::Neither).count();
    let mut l_pts: Vec<C2Point> = Vec::new();
    let mut m_pts: Vec<C2Point> = Vec::new();
    for (p, l) in grid.iter().zip(&labels) {
        if l.is_l() {
            l_pts.push(*p);
        }
        if l.is_m() {
            m_pts.push(*p);
        }
    }
    for k in k_history {
        for p in k.iter() {
            if label_for(f.re(p), REGION_TOL).is_l() {
                l_pts.push(*p);
            }
        }
    }
    Ok((
        PointCloud::new(l_pts, CloudTag::LWitness, Some(stage), BIDISK_SLACK)?,
        PointCloud::new(m_pts, CloudTag::MWitness, Some(stage), BIDISK_SLACK)?,
        unresolved,
    ))
}

/// Keep the level-set samples where `|F| <= bound`; returns the kept cloud,
/// the largest kept `|F|` and the number dropped.
fn certify_level_set(f: &StageFunction, k: &PointCloud, bound: f64, stage: usize) -> (PointCloud, f64, usize) {
    let ln_bound = bound.ln();
    let vals = values_on(f, k);
    let mut kept = Vec::new();
    let mut worst = f64::NEG_INFINITY;
    for (p, v) in k.iter().zip(&vals) {
        match v.ln_abs() {
            Some(ln) if ln <= ln_bound => {
                worst = worst.max(ln);
                kept.push(*p);
            }
            _ => {}
        }
    }
    let dropped = k.len() - kept.len();
    let cloud = PointCloud::new(kept, CloudTag::K, Some(stage), k.tol()).expect("subset of a valid cloud");
    (cloud, worst.exp(), dropped)
}

/// Runs the construction for `cfg.stages` stages.
pub fn run_construction(cfg: &ConstructionConfig) -> Result<Construction> {
    cfg.validate()?;
    let grid = sample_bidisk(&cfg.grid);
    let mut stages: Vec<Stage> = Vec::with_capacity(cfg.stages);
    let mut skipped = Vec::new();
    let mut pairs = candidate_pairs(cfg);

    while stages.len() < cfg.stages {
        let Some((source, poly, a)) = pairs.next() else {
            return Err(Error::Budget(format!(
                "pair enumeration exhausted after {} stages (max_pairs = {})",
                stages.len(),
                cfg.max_pairs
            )));
        };
        let skip = |reason: String, skipped: &mut Vec<SkippedPair>| {
            skipped.push(SkippedPair {
                source,
                poly: poly.to_string(),
                a,
                reason,
            })
        };
        let index = stages.len() + 1;
        let g = match ScaledPoly::normalize(&poly, a) {
            Ok(g) => g,
            Err(e) => {
                skip(e.to_string(), &mut skipped);
                continue;
            }
        };
        let raw_k = extract_level_set(&poly, a, &cfg.grid, cfg.tol_residual);
        if raw_k.is_empty() {
            skip("level set has no sampled points".into(), &mut skipped);
            continue;
        }

        let (function, exponent) = match stages.last() {
            None => (StageFunction::base(g.clone()), None),
            Some(prev) => {
                let choice = select_exponent(&prev.function, &g, &prev.l_witnesses, cfg.n_safety, cfg.max_n)?;
                (prev.function.compose(choice.n, g.clone()), Some(choice))
            }
        };
        let (k_cloud, k_max_abs, k_dropped) = certify_level_set(&function, &raw_k, cfg.tol_level, index);
        if k_cloud.is_empty() {
            skip(
                format!("no level-set sample has |F_{index}| <= {}", cfg.tol_level),
                &mut skipped,
            );
            continue;
        }

        let prev_bound = match stages.last() {
            None => None,
            Some(prev) => {
                let n = exponent.expect("set for later stages").n;
                let on_l = exponent_log_bound(&prev.function, &g, &prev.l_witnesses, n)?.exp();
                Some(on_l.max(k_max_abs))
            }
        };
        let origin_error = (function.eval(&C2Point::ORIGIN)? - 1.0).norm();
        let history: Vec<&PointCloud> = stages
            .iter()
            .map(|s| &s.k_cloud)
            .chain(std::iter::once(&k_cloud))
            .collect();
        let (l_witnesses, m_witnesses, unresolved) = witnesses(&function, &grid, &history, index)?;

        stages.push(Stage {
            index,
            source,
            poly,
            a,
            g,
            exponent,
            function,
            k_cloud,
            l_witnesses,
            m_witnesses,
            margins: StageMargins {
                origin_error,
                k_max_abs,
                k_dropped,
                prev_bound,
                unresolved,
            },
        });
    }
    Ok(Construction { stages, skipped, grid })
}

/// `max |F_j|` over a cloud, `None` if some value is unresolved.
pub fn sup_abs(f: &StageFunction, cloud: &PointCloud) -> Option<f64> {
    max_abs(&values_on(f, cloud))
}
