//! Code-selective power of detected SSBs, extrapolation to maximum
//! exposure, and uncertainty budgets.

mod budget;
mod power;
mod report;

pub use budget::{
    check_targets, combine_uncertainty, default_components, Distribution, MeasurementMode,
    TargetCheck, UncertaintyBudget, UncertaintyComponent, DEFAULT_COVERAGE_FACTOR,
};
pub use power::{code_selective_power, despread_grid, SignalClass, SignalPowers};
pub use report::{extrapolate_exposure, ExposureReport, Extrapolation, SUBCARRIERS_PER_RB};
