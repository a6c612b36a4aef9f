//! Samples the varieties `{F_j = 1}` of the default construction, extends
//! them to the boundary and reports their reach and the limit cloud.

use std::time::Instant;

use shilov::construction::{run_construction, ConstructionConfig};
use shilov::varieties::{limit_set, refine_toward_boundary, sample_variety, RefineOptions};

fn main() -> shilov::Result<()> {
    let cfg = ConstructionConfig::default();
    let run = run_construction(&cfg)?;
    let opts = RefineOptions::default();
    let mut samples = Vec::new();
    for s in &run.stages {
        let t = Instant::now();
        let raw = sample_variety(&s.function, &cfg.grid, cfg.tol_residual, Some(s.index));
        let refined = refine_toward_boundary(&s.function, &raw, &opts);
        let min_re = run.stages[..s.index - 1]
            .iter()
            .flat_map(|prev| refined.cloud.iter().map(|p| prev.function.re(p).unwrap_or(f64::NAN)))
            .fold(f64::INFINITY, f64::min);
        println!(
            "V_{}: {} raw -> {} refined points, reach {:.6}, residual {:.1e}, min Re F_i - 1/2 = {:.3e} ({:.2?})",
            s.index,
            raw.cloud.len(),
            refined.cloud.len(),
            refined.boundary_reach,
            refined.residual,
            min_re - 0.5,
            t.elapsed()
        );
        samples.push(refined);
    }
    let t = Instant::now();
    let lim = limit_set(&samples, 1e-3, 1e-3)?;
    println!(
        "limit: indices {:?}, gaps {:?}, |V| = {}, |Y| = {} ({:.2?})",
        lim.chosen_indices,
        lim.gap_diagnostics,
        lim.v.len(),
        lim.y.len(),
        t.elapsed()
    );
    Ok(())
}
