//! Post-processing for VNA frequency-sweep channel sounding.

mod array;
mod link;
mod pdp;
mod phase;
mod sweep;

pub use array::{
    aoa_delay_profile, beamform, deembed_pattern, unit_vector, AoaDelayMap, AoaOptions, AoaProfile,
    ElementPattern, PatternPoint, Steering, VirtualArrayScan, DEFAULT_PATTERN_MASK_DB,
};
pub use link::{link_budget_range, RangeEstimate};
pub use pdp::{cir_to_pdp, Pdp};
pub use phase::compensate_phase;
pub use sweep::{sweep_to_cir, Cir, FrequencySweep, Window};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
