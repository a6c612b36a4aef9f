//! Runs the default five-stage construction and prints each stage.

use shilov::construction::{run_construction, ConstructionConfig};

fn main() -> shilov::Result<()> {
    let run = run_construction(&ConstructionConfig::default())?;
    for s in &run.stages {
        println!(
            "stage {}: p = {}, a = {:.6}, N = {:?}, |K| = {} (dropped {}), max|F| on K = {:.2e}, prev bound = {:?}, |L| = {}, |M| = {}, unresolved = {}",
            s.index,
            s.poly,
            s.a,
            s.exponent.map(|e| e.n),
            s.k_cloud.len(),
            s.margins.k_dropped,
            s.margins.k_max_abs,
            s.margins.prev_bound,
            s.l_witnesses.len(),
            s.m_witnesses.len(),
            s.margins.unresolved,
        );
    }
    for k in &run.skipped {
        println!("skipped {:?}: {} at {:.4}: {}", k.source, k.poly, k.a, k.reason);
    }
    Ok(())
}
