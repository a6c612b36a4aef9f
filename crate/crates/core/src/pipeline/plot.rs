//! SVG scatter plots of coordinate projections and of the selection gaps.

use std::collections::BTreeSet;
use std::fmt::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{C2Point, PointCloud};

use super::manifest::RunManifest;
use super::run::load_run;

const SIZE: f64 = 400.0;
const PAD: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PlotKind {
    /// `z`-coordinates.
    Proj1,
    /// `w`-coordinates.
    Proj2,
    Gaps,
}

impl PlotKind {
    pub fn file_name(&self) -> &'static str {
        match self {
            PlotKind::Proj1 => "proj1.svg",
            PlotKind::Proj2 => "proj2.svg",
            PlotKind::Gaps => "gaps.svg",
        }
    }
}

impl FromStr for PlotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "proj1" => Ok(PlotKind::Proj1),
            "proj2" => Ok(PlotKind::Proj2),
            "gaps" => Ok(PlotKind::Gaps),
            other => Err(Error::Config(format!("unknown plot {other:?} (expected proj1, proj2 or gaps)"))),
        }
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, "<title>{title}</title>");
    let _ = writeln!(out, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
}

/// Pixel position of a point of the closed unit disk.
fn to_px(c: Complex64) -> (f64, f64) {
    let half = (SIZE - 2.0 * PAD) / 2.0;
    (PAD + half * (1.0 + c.re), PAD + half * (1.0 - c.im))
}

/// Points rounded to a quarter pixel, duplicates removed, in a fixed order.
fn pixels(pts: impl Iterator<Item = Complex64>) -> BTreeSet<(i64, i64)> {
    pts.map(|c| {
        let (x, y) = to_px(c);
        ((x * 4.0).round() as i64, (y * 4.0).round() as i64)
    })
    .collect()
}

/// Scatter of one coordinate of `v` (grey) and `y` (red) in the unit disk.
pub fn projection_svg(v: &PointCloud, y: &PointCloud, coord: fn(&C2Point) -> Complex64, title: &str) -> String {
    let mut out = String::new();
    header(&mut out, title);
    let (cx, cy) = to_px(Complex64::new(0.0, 0.0));
    let r = (SIZE - 2.0 * PAD) / 2.0;
    let _ = writeln!(out, r##"<circle cx="{cx}" cy="{cy}" r="{r}" fill="none" stroke="#444"/>"##);
    let _ = writeln!(out, r##"<line x1="{PAD}" y1="{cy}" x2="{}" y2="{cy}" stroke="#bbb"/>"##, SIZE - PAD);
    let _ = writeln!(out, r##"<line x1="{cx}" y1="{PAD}" x2="{cx}" y2="{}" stroke="#bbb"/>"##, SIZE - PAD);
    for (cloud, class, fill) in [(v, "V", "#777"), (y, "Y", "#c00")] {
        let _ = writeln!(out, r#"<g class="{class}" fill="{fill}">"#);
        for (x, yy) in pixels(cloud.iter().map(coord)) {
            let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="0.8"/>"#, x as f64 / 4.0, yy as f64 / 4.0);
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}

/// Line plot of the Hausdorff gaps between successive selected clouds,
/// one marker per gap.
pub fn gaps_svg(gaps: &[f64], chosen: &[usize]) -> String {
    let mut out = String::new();
    header(&mut out, "selection gaps");
    let top = gaps.iter().copied().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let n = gaps.len().max(1) as f64;
    let x = |i: usize| PAD + (SIZE - 2.0 * PAD) * (i as f64 + 0.5) / n;
    let y = |g: f64| SIZE - PAD - (SIZE - 2.0 * PAD) * g / top;
    let _ = writeln!(
        out,
        r##"<line x1="{PAD}" y1="{}" x2="{}" y2="{}" stroke="#444"/>"##,
        SIZE - PAD,
        SIZE - PAD,
        SIZE - PAD
    );
    let _ = writeln!(out, r##"<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{}" stroke="#444"/>"##, SIZE - PAD);
    let _ = writeln!(out, r##"<text x="{}" y="14" font-size="10">max gap {top:.6e}</text>"##, PAD + 4.0);
    if !gaps.is_empty() {
        let pts: Vec<String> = gaps.iter().enumerate().map(|(i, &g)| format!("{:.3},{:.3}", x(i), y(g))).collect();
        let _ = writeln!(out, r##"<polyline fill="none" stroke="#06c" points="{}"/>"##, pts.join(" "));
    }
    let _ = writeln!(out, r##"<g class="gap" fill="#06c">"##);
    for (i, &g) in gaps.iter().enumerate() {
        let label = match (chosen.get(i), chosen.get(i + 1)) {
            (Some(a), Some(b)) => format!("{}-{}", a + 1, b + 1),
            _ => format!("{i}"),
        };
        let _ = writeln!(
            out,
            r#"<circle cx="{:.3}" cy="{:.3}" r="3"><title>{label}: {g:.6e}</title></circle>"#,
            x(i),
            y(g)
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// Writes the requested plots of a persisted run into `out_dir`.
pub fn plot_manifest(manifest_path: &Path, which: &[PlotKind], out_dir: &Path) -> Result<Vec<PathBuf>> {
    if which.is_empty() {
        return Err(Error::Config("no plot selected".into()));
    }
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let needs_clouds = which.iter().any(|k| *k != PlotKind::Gaps);
    let (manifest, clouds) = if needs_clouds {
        let run = load_run(manifest_path)?;
        (run.manifest, Some((run.v, run.y)))
    } else {
        (RunManifest::load(manifest_path)?, None)
    };
    let mut written = Vec::new();
    let kinds: BTreeSet<PlotKind> = which.iter().copied().collect();
    for k in kinds {
        let svg = match (k, &clouds) {
            (PlotKind::Proj1, Some((v, y))) => projection_svg(v, y, |p| p.z, "projection to z"),
            (PlotKind::Proj2, Some((v, y))) => projection_svg(v, y, |p| p.w, "projection to w"),
            _ => gaps_svg(&manifest.limit.gap_diagnostics, &manifest.limit.chosen_indices),
        };
        let path = out_dir.join(k.file_name());
        std::fs::write(&path, svg).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
