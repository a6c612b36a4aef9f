//! The varieties `{F_j = 1}` inside the closed bidisk: sampling, extension to
//! the boundary, the limit cloud and its boundary part.

mod limit;
mod sample;
mod trace;

pub use limit::{limit_set, restrict_to_shell, LimitSet, LimitSummary};
pub use sample::{sample_variety, VarietyDiagnostics, VarietySample, REACH_TARGET};
pub use trace::{refine_toward_boundary, RefineOptions};
