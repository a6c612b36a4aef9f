use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::construction::ConstructionConfig;
use crate::error::{Error, Result};
use crate::geometry::GridSpec;
use crate::polynomials::BiPoly;

/// A pair `(p, a)` tried before the enumeration. `poly` uses the term
/// record syntax `[[m, n, re_num, re_den, im_num, im_den], ...]` for
/// `Σ c z^m w^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InjectedPair {
    pub poly: String,
    /// `[re, im]`.
    pub a: [f64; 2],
}

impl InjectedPair {
    /// Parses `<poly-record>:<re>,<im>`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |r: &str| Error::Config(format!("bad --inject {text:?}: {r}"));
        let (poly, a) = text.rsplit_once(':').ok_or_else(|| bad("expected <poly>:<re>,<im>"))?;
        let (re, im) = a.split_once(',').ok_or_else(|| bad("expected <re>,<im> after ':'"))?;
        let re: f64 = re.trim().parse().map_err(|_| bad("real part is not a number"))?;
        let im: f64 = im.trim().parse().map_err(|_| bad("imaginary part is not a number"))?;
        let pair = InjectedPair {
            poly: poly.trim().to_string(),
            a: [re, im],
        };
        pair.resolve().map_err(|e| bad(&e.to_string()))?;
        Ok(pair)
    }

    pub fn resolve(&self) -> Result<(BiPoly, Complex64)> {
        let p = BiPoly::parse_record(&self.poly)?;
        Ok((p, Complex64::new(self.a[0], self.a[1])))
    }
}

/// Everything a run depends on. A manifest echoes it in full, and a run is
/// reproducible from that echo alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub stages: usize,
    pub grid: GridSpec,
    pub tol_level: f64,
    pub tol_residual: f64,
    pub n_safety: f64,
    pub max_n: u32,
    pub degree_cap: u32,
    pub denom_cap: i64,
    /// Boundary thickness of `Y`.
    pub delta_bd: f64,
    /// Gap requested from the Cauchy-subsequence selection.
    pub target_gap: f64,
    pub seed: u64,
    pub injected_pairs: Vec<InjectedPair>,
    pub output_dir: PathBuf,
    pub max_pairs: usize,
    /// Degree and evaluation budget of the hull search against `Y`.
    pub hull_degree: u32,
    pub hull_budget: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let c = ConstructionConfig::default();
        RunConfig {
            stages: c.stages,
            grid: c.grid,
            tol_level: c.tol_level,
            tol_residual: c.tol_residual,
            n_safety: c.n_safety,
            max_n: c.max_n,
            degree_cap: c.degree_cap,
            denom_cap: c.denom_cap,
            delta_bd: 1e-3,
            target_gap: 1e-3,
            seed: 0,
            injected_pairs: Vec::new(),
            output_dir: PathBuf::from("run"),
            max_pairs: c.max_pairs,
            hull_degree: 4,
            hull_budget: 10_000,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.stages == 0 {
            return bad("stages must be at least 1".into());
        }
        for (name, v) in [
            ("tol_level", self.tol_level),
            ("tol_residual", self.tol_residual),
            ("n_safety", self.n_safety),
            ("delta_bd", self.delta_bd),
            ("target_gap", self.target_gap),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if self.hull_budget == 0 {
            return bad("hull_budget must be positive".into());
        }
        for p in &self.injected_pairs {
            p.resolve().map_err(|e| Error::Config(format!("injected pair {:?}: {e}", p.poly)))?;
        }
        self.construction()?.validate().map_err(|e| Error::Config(e.to_string()))
    }

    pub fn construction(&self) -> Result<ConstructionConfig> {
        Ok(ConstructionConfig {
            stages: self.stages,
            grid: self.grid,
            tol_level: self.tol_level,
            tol_residual: self.tol_residual,
            n_safety: self.n_safety,
            max_n: self.max_n,
            degree_cap: self.degree_cap,
            denom_cap: self.denom_cap,
            injected_pairs: self
                .injected_pairs
                .iter()
                .map(InjectedPair::resolve)
                .collect::<Result<_>>()?,
            max_pairs: self.max_pairs,
        })
    }
}
