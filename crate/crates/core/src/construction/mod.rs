//! The inductive construction: stage functions, level sets, the regions
//! `{Re F <= 1/2}` and `{Re F >= 1/2}`, exponent choice, and the stage loop.

mod driver;
mod exponent;
mod level_set;
mod newton;
mod region;
mod stage_fn;

pub use driver::{
    run_construction, sup_abs, Construction, ConstructionConfig, PairSource, SkippedPair, Stage, StageMargins,
};
pub use exponent::{exponent_is_minimal, exponent_log_bound, select_exponent, ExponentChoice};
pub use level_set::{extract_level_set, polish_grid_level, POLISH_MAX_ITER, SEED_THRESHOLD};
pub use newton::{newton_converge, newton_polish, polish_to_floor, solve_one_coordinate, Free, PolishFailure, Polished};
pub use region::{classify_region, label_for, RegionLabel, REGION_TOL};
pub use stage_fn::{ComposeStep, StageFunction, StageValue, PHASE_LIMIT};
