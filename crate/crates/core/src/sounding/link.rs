use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::SPEED_OF_LIGHT;
use crate::{Error, Result};

/// Maximum free-space range of a sounding link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeEstimate {
    pub range_m: f64,
    pub margin_db: f64,
    /// False when the link closes only inside one wavelength, where the
    /// free-space model does not hold; `range_m` is then 0.
    pub feasible: bool,
}

/// Largest distance at which the received power reaches the noise floor
/// under free-space path loss `20 log10(4 pi d f / c)`.
pub fn link_budget_range(
    tx_power_dbm: f64,
    gains_dbi: f64,
    freq: f64,
    noise_floor_dbm: f64,
) -> Result<RangeEstimate> {
    if !(freq > 0.0) || !freq.is_finite() {
        return Err(Error::domain(format!("frequency must be positive, got {freq}")));
    }
    if ![tx_power_dbm, gains_dbi, noise_floor_dbm].iter().all(|v| v.is_finite()) {
        return Err(Error::domain("link budget terms must be finite"));
    }
    let margin_db = tx_power_dbm + gains_dbi - noise_floor_dbm;
    let wavelength = SPEED_OF_LIGHT / freq;
    let d = wavelength / (4.0 * PI) * 10f64.powf(margin_db / 20.0);
    let feasible = d >= wavelength;
    Ok(RangeEstimate {
        range_m: if feasible { d } else { 0.0 },
        margin_db,
        feasible,
    })
}
