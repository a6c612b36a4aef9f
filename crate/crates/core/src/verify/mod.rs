//! Certification of constructed stages and of the sampled limit set.

mod diagnostics;
mod facts;
mod fit;
mod hull;
mod max_modulus;
mod report;
mod suite;

pub use diagnostics::{
    eta_coverage, occupied_cells, projection_occupancy, projection_thinness_profile, check_projection_thinness,
    spectrum_gap, THINNESS_CELLS,
};
pub use facts::{check_certificate_c, check_nesting, check_v_in_m, LEVEL_TOL, SEPARATION_TOL, V_IN_M_TOL};
pub use fit::{fit_certificate_poly, fit_nodes, least_squares_poly, monomial_values, FitCertificate, MAX_CONDITION};
pub use hull::{
    exhaustive_monomial_certificate, hull_search, search_hull_certificate, Certificate, HullSearch, MARGIN_FLOOR,
};
pub use max_modulus::{
    battery, check_max_modulus, check_max_modulus_battery, BatteryPoly, FAMILY_PREFIX, MAX_MODULUS_TOL,
    RANDOM_DEGREE, RANDOM_MEMBERS,
};
pub use report::{CheckRecord, VerificationReport, MAX_WITNESSES};
pub use suite::{
    check_stage_invariants, eta_ratio_samples, run_suite, SuiteSettings, ETA_DELTA, ETA_S_VALUES, LEVEL_ZERO_TOL, ORIGIN_TOL,
    PREVIOUS_BOUND,
};
