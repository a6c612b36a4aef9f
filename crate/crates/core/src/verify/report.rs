use serde::{Deserialize, Serialize};

use crate::geometry::C2Point;

/// One verified quantity. Positive margins mean the property holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub stage: Option<usize>,
    #[serde(with = "crate::floats")]
    pub margin: f64,
    #[serde(with = "crate::floats")]
    pub tolerance: f64,
    /// `margin > -tolerance` rather than `>=`.
    pub strict: bool,
    pub pass: bool,
    /// Hard checks decide the exit status; the others are diagnostics.
    pub gate: bool,
    /// The point realizing the margin, and for failures every offending
    /// point (capped).
    pub witnesses: Vec<C2Point>,
    #[serde(with = "crate::floats::vec")]
    pub values: Vec<f64>,
    pub note: Option<String>,
}

/// Witnesses kept per failing record.
pub const MAX_WITNESSES: usize = 16;

impl CheckRecord {
    pub fn new(name: &str, stage: Option<usize>, margin: f64, tolerance: f64) -> Self {
        CheckRecord {
            name: name.to_string(),
            stage,
            margin,
            tolerance,
            strict: false,
            pass: margin >= -tolerance,
            gate: true,
            witnesses: Vec::new(),
            values: Vec::new(),
            note: None,
        }
    }

    pub fn strict(mut self) -> Self {
        self.strict = true;
        self.pass = self.margin > -self.tolerance;
        self
    }

    pub fn diagnostic(mut self) -> Self {
        self.gate = false;
        self
    }

    pub fn with_witnesses(mut self, mut w: Vec<C2Point>) -> Self {
        w.truncate(MAX_WITNESSES);
        self.witnesses = w;
        self
    }

    pub fn with_values(mut self, v: Vec<f64>) -> Self {
        self.values = v;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn push(&mut self, r: CheckRecord) {
        self.records.push(r);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.records.extend(other.records);
    }

    pub fn hard_failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.gate && !r.pass)
    }

    pub fn all_hard_pass(&self) -> bool {
        self.hard_failures().next().is_none()
    }

    pub fn named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a CheckRecord> + 'a {
        self.records.iter().filter(move |r| r.name == name)
    }

    /// Smallest margin among records with this name.
    pub fn min_margin(&self, name: &str) -> Option<f64> {
        self.named(name).map(|r| r.margin).reduce(f64::min)
    }

    /// Fixed-width text table, one line per record.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:<28} {:>5} {:>14} {:>10} {:>5}\n",
            "check", "stage", "margin", "tol", "ok"
        );
        for r in &self.records {
            let stage = r.stage.map(|s| s.to_string()).unwrap_or_else(|| "-".into());
            let ok = match (r.pass, r.gate) {
                (true, _) => "pass",
                (false, true) => "FAIL",
                (false, false) => "info",
            };
            out.push_str(&format!(
                "{:<28} {:>5} {:>14.6e} {:>10.1e} {:>5}\n",
                r.name, stage, r.margin, r.tolerance, ok
            ));
        }
        out
    }
}

/// `(min, argmin)` of `f` over the points; `f` returning `None` counts as
/// `-inf`.
pub(crate) fn min_over<'a>(
    pts: impl Iterator<Item = &'a C2Point>,
    f: impl Fn(&C2Point) -> Option<f64>,
) -> (f64, Option<C2Point>) {
    let mut best = f64::INFINITY;
    let mut arg = None;
    for p in pts {
        let v = f(p).filter(|v| !v.is_nan()).unwrap_or(f64::NEG_INFINITY);
        if v < best {
            best = v;
            arg = Some(*p);
        }
    }
    (best, arg)
}

/// Record for `min f >= -tol` over `pts`, listing offending points on
/// failure and the minimizer otherwise.
pub(crate) fn min_check<'a>(
    name: &str,
    stage: Option<usize>,
    pts: impl Iterator<Item = &'a C2Point> + Clone,
    f: impl Fn(&C2Point) -> Option<f64>,
    tol: f64,
) -> CheckRecord {
    let (m, arg) = min_over(pts.clone(), &f);
    let rec = CheckRecord::new(name, stage, m, tol);
    let witnesses = if rec.pass {
        arg.into_iter().collect()
    } else {
        pts.filter(|p| f(p).filter(|v| !v.is_nan()).is_none_or(|v| v < -tol))
            .take(MAX_WITNESSES)
            .copied()
            .collect()
    };
    rec.with_witnesses(witnesses)
}
