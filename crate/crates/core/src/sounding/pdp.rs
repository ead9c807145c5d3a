use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use super::sweep::Cir;
use crate::{Error, Result};

/// Lowest level reported for an empty bin, dB below the peak.
pub const PDP_FLOOR_DB: f64 = -300.0;

/// Power delay profile normalized to a 0 dB peak.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pdp {
    pub delays: Vec<f64>,
    pub power_db: Vec<f64>,
    /// Mean noise level relative to the peak, dB.
    pub noise_floor_db: f64,
}

impl Pdp {
    pub fn peak_index(&self) -> usize {
        self.power_db
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    /// Indices of local maxima at or above `min_db`.
    pub fn local_maxima(&self, min_db: f64) -> Vec<usize> {
        let p = &self.power_db;
        let n = p.len();
        (0..n)
            .filter(|&i| {
                let prev = p[(i + n - 1) % n];
                let next = p[(i + 1) % n];
                p[i] >= min_db && p[i] > prev && p[i] >= next
            })
            .collect()
    }
}

/// Normalized PDP of a CIR.
///
/// The noise floor is taken from the upper half of the delay axis: the
/// median tap power there, divided by ln 2 so that it estimates the mean of
/// exponentially distributed noise power.
pub fn cir_to_pdp(cir: &Cir) -> Result<Pdp> {
    let power: Vec<f64> = cir.taps.iter().map(|t| t.norm_sqr()).collect();
    let peak = power.iter().cloned().fold(0.0, f64::max);
    if !(peak > 0.0) || !peak.is_finite() {
        return Err(Error::input("PDP of an all-zero impulse response"));
    }
    let power_db = power.iter().map(|p| rel_db(*p, peak)).collect();
    let mut tail: Vec<f64> = power[power.len() / 2..].to_vec();
    tail.sort_by(f64::total_cmp);
    let median = if tail.is_empty() {
        0.0
    } else if tail.len() % 2 == 1 {
        tail[tail.len() / 2]
    } else {
        0.5 * (tail[tail.len() / 2 - 1] + tail[tail.len() / 2])
    };
    Ok(Pdp {
        delays: cir.delays(),
        power_db,
        noise_floor_db: rel_db(median / LN_2, peak),
    })
}

fn rel_db(p: f64, peak: f64) -> f64 {
    if p <= 0.0 {
        PDP_FLOOR_DB
    } else {
        (10.0 * (p / peak).log10()).max(PDP_FLOOR_DB)
    }
}
