//! Run orchestration: configuration, build, persisted artifacts,
//! re-verification, hull tests and plots.

mod config;
mod io;
mod manifest;
mod plot;
mod run;

use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{C2Point, CloudTag, BIDISK_SLACK};
use crate::verify::{hull_search, HullSearch};

pub use config::{InjectedPair, RunConfig};
pub use io::{read_cloud, read_cloud_from, write_cloud, write_cloud_to, CSV_HEADER};
pub use manifest::{CloudFile, RunManifest, StageRecord, Timings, MANIFEST_FILE, SCHEMA_VERSION};
pub use plot::{gaps_svg, plot_manifest, projection_svg, PlotKind};
pub use run::{
    build, build_and_write, load_run, verify_manifest, write_artifacts, BuildArtifacts, LoadedRun, VerifyOutcome,
    CLOUD_DIR,
};

/// Parses `re_z,im_z,re_w,im_w`.
pub fn parse_point(text: &str) -> Result<C2Point> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::parse("point", format!("{text:?}: {e}")))?;
    match parts[..] {
        [a, b, c, d] => Ok(C2Point::new(Complex64::new(a, b), Complex64::new(c, d))),
        _ => Err(Error::parse("point", format!("{text:?}: expected four numbers re_z,im_z,re_w,im_w"))),
    }
}

/// Hull-membership search for `target` against a cloud file.
pub fn hull_test(target: &C2Point, cloud_path: &Path, degree: u32, budget: usize, seed: u64) -> Result<HullSearch> {
    let cloud = read_cloud(cloud_path, CloudTag::HullCandidate, BIDISK_SLACK)?;
    hull_search(target, &cloud, degree, budget, seed)
}
