//! Builds the default run into a temporary directory, re-verifies it from
//! disk and writes the plots.

use shilov::pipeline::{build_and_write, plot_manifest, verify_manifest, PlotKind, RunConfig};

fn main() -> shilov::Result<()> {
    let out = std::env::temp_dir().join("shilov-example-run");
    let cfg = RunConfig {
        output_dir: out.clone(),
        ..RunConfig::default()
    };
    let (art, manifest) = build_and_write(&cfg)?;
    let report = &art.manifest.report;
    let failures: Vec<_> = report.hard_failures().map(|r| r.name.as_str()).collect();
    println!("{} records, hard failures: {failures:?}", report.records.len());
    println!("timings: {:?}", art.manifest.timings);

    let again = verify_manifest(&manifest)?;
    println!("re-verification reproduces the build: {}", again.reproduces_build());

    for p in plot_manifest(&manifest, &[PlotKind::Proj1, PlotKind::Proj2, PlotKind::Gaps], &out.join("plots"))? {
        println!("wrote {}", p.display());
    }
    Ok(())
}
