use serde::{Deserialize, Serialize};

use super::budget::{check_targets, MeasurementMode, TargetCheck, UncertaintyBudget};
use super::power::SignalPowers;
use crate::{dsp, Error, Result};

pub const SUBCARRIERS_PER_RB: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    pub power: f64,
    pub power_db: f64,
}

/// Maximum-exposure extrapolation `re_power * n_re_total * duty`.
pub fn extrapolate_exposure(re_power: f64, n_re_total: usize, duty: f64) -> Result<Extrapolation> {
    if !(duty > 0.0 && duty <= 1.0) {
        return Err(Error::domain(format!("duty must lie in (0, 1], got {duty}")));
    }
    if n_re_total < 1 {
        return Err(Error::domain("n_re_total must be at least 1"));
    }
    if !(re_power >= 0.0) || !re_power.is_finite() {
        return Err(Error::domain(format!("RE power must be finite and nonnegative, got {re_power}")));
    }
    let power = re_power * n_re_total as f64 * duty;
    Ok(Extrapolation {
        power,
        power_db: dsp::db10(power),
    })
}

/// Code-selective exposure result. Powers are relative to one RE of unit
/// power; dB values use the same reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExposureReport {
    pub per_signal_re_power: SignalPowers,
    pub per_signal_re_power_db: SignalPowers,
    /// Class power used as the extrapolation base (the strongest class).
    pub reference_re_power: f64,
    pub extrapolated_power: f64,
    pub extrapolated_power_db: f64,
    pub rb_count: usize,
    pub n_re_total: usize,
    pub duty: f64,
    pub uncertainty: UncertaintyBudget,
    pub target_check: TargetCheck,
}

impl ExposureReport {
    pub fn new(
        powers: SignalPowers,
        rb_count: usize,
        duty: f64,
        uncertainty: UncertaintyBudget,
        mode: MeasurementMode,
    ) -> Result<Self> {
        let n_re_total = rb_count * SUBCARRIERS_PER_RB;
        let reference = powers.max();
        let ext = extrapolate_exposure(reference, n_re_total, duty)?;
        Ok(Self {
            per_signal_re_power: powers,
            per_signal_re_power_db: SignalPowers {
                pss: dsp::db10(powers.pss),
                sss: dsp::db10(powers.sss),
                dmrs: dsp::db10(powers.dmrs),
                pbch: dsp::db10(powers.pbch),
            },
            reference_re_power: reference,
            extrapolated_power: ext.power,
            extrapolated_power_db: ext.power_db,
            rb_count,
            n_re_total,
            duty,
            target_check: check_targets(&uncertainty, mode),
            uncertainty,
        })
    }
}
