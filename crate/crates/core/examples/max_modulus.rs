//! The maximum-modulus battery on the limit cloud of the default run: the
//! sup of each polynomial over V against its sup over the boundary part Y.

use shilov::pipeline::{build, RunConfig};
use shilov::verify::{battery, check_max_modulus_battery, MAX_MODULUS_TOL};

fn main() -> shilov::Result<()> {
    let cfg = RunConfig::default();
    let art = build(&cfg)?;
    let polys = battery(cfg.degree_cap, cfg.denom_cap, cfg.seed);
    let rep = check_max_modulus_battery(&polys, &art.limit.v, &art.limit.y, MAX_MODULUS_TOL);
    for r in &rep.records {
        println!(
            "{:<5} sup_V {:.6} sup_Y {:.6}  {}",
            if r.pass { "ok" } else { "FAIL" },
            r.values[0],
            r.values[1],
            r.note.as_deref().unwrap_or("")
        );
    }
    println!("|V| = {}, |Y| = {}", art.limit.v.len(), art.limit.y.len());
    Ok(())
}
