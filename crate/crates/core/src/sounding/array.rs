use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::pdp::PDP_FLOOR_DB;
use super::sweep::{response_to_cir, FrequencySweep, Window};
use super::SPEED_OF_LIGHT;
use crate::{Error, Result};

/// Mask applied when de-embedding, dB relative to the pattern maximum.
pub const DEFAULT_PATTERN_MASK_DB: f64 = -30.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatternPoint {
    pub angle_deg: f64,
    pub gain_db: f64,
    pub phase_deg: f64,
}

/// Complex element gain versus azimuth, linearly interpolated in dB and
/// phase between table rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementPattern {
    points: Vec<PatternPoint>,
}

impl ElementPattern {
    pub fn new(mut points: Vec<PatternPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::input("element pattern has no rows"));
        }
        if points
            .iter()
            .any(|p| !(p.angle_deg.is_finite() && p.gain_db.is_finite() && p.phase_deg.is_finite()))
        {
            return Err(Error::input("element pattern has non-finite values"));
        }
        points.sort_by(|a, b| a.angle_deg.total_cmp(&b.angle_deg));
        if points.windows(2).any(|w| w[0].angle_deg == w[1].angle_deg) {
            return Err(Error::input("element pattern repeats an angle"));
        }
        Ok(Self { points })
    }

    /// Isotropic pattern over the full circle.
    pub fn isotropic() -> Self {
        Self {
            points: [-180.0, 180.0]
                .into_iter()
                .map(|angle_deg| PatternPoint {
                    angle_deg,
                    gain_db: 0.0,
                    phase_deg: 0.0,
                })
                .collect(),
        }
    }

    pub fn points(&self) -> &[PatternPoint] {
        &self.points
    }

    pub fn covers(&self, angle_deg: f64) -> bool {
        let first = self.points[0].angle_deg;
        let last = self.points[self.points.len() - 1].angle_deg;
        (first..=last).contains(&angle_deg)
    }

    pub fn peak_gain_db(&self) -> f64 {
        self.points.iter().map(|p| p.gain_db).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Interpolated gain in dB and phase in degrees, `None` outside the table.
    pub fn lookup(&self, angle_deg: f64) -> Option<(f64, f64)> {
        if !self.covers(angle_deg) {
            return None;
        }
        let i = self.points.partition_point(|p| p.angle_deg <= angle_deg);
        if i == self.points.len() {
            let p = self.points[i - 1];
            return Some((p.gain_db, p.phase_deg));
        }
        let (a, b) = (self.points[i - 1], self.points[i]);
        let t = (angle_deg - a.angle_deg) / (b.angle_deg - a.angle_deg);
        let dphi = (b.phase_deg - a.phase_deg + 180.0).rem_euclid(360.0) - 180.0;
        Some((a.gain_db + t * (b.gain_db - a.gain_db), a.phase_deg + t * dphi))
    }

    /// Complex amplitude gain at `angle_deg`.
    pub fn gain(&self, angle_deg: f64) -> Option<Complex64> {
        self.lookup(angle_deg)
            .map(|(g, ph)| Complex64::from_polar(10f64.powf(g / 20.0), ph.to_radians()))
    }
}

/// Per-element sweeps recorded on a virtual array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VirtualArrayScan {
    pub positions: Vec<[f64; 3]>,
    pub sweeps: Vec<FrequencySweep>,
    pub pattern: Option<ElementPattern>,
}

impl VirtualArrayScan {
    pub fn new(positions: Vec<[f64; 3]>, sweeps: Vec<FrequencySweep>) -> Result<Self> {
        let scan = Self {
            positions,
            sweeps,
            pattern: None,
        };
        scan.validate()?;
        Ok(scan)
    }

    pub fn with_pattern(mut self, pattern: ElementPattern) -> Self {
        self.pattern = Some(pattern);
        self
    }

    pub fn n_elements(&self) -> usize {
        self.positions.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.positions.len() < 2 {
            return Err(Error::input("a virtual array needs at least 2 elements"));
        }
        if self.sweeps.len() != self.positions.len() {
            return Err(Error::input(format!(
                "{} sweeps for {} element positions",
                self.sweeps.len(),
                self.positions.len()
            )));
        }
        if self.positions.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::input("non-finite element position"));
        }
        for s in &self.sweeps {
            s.validate()?;
        }
        let first = &self.sweeps[0];
        if let Some(m) = self.sweeps.iter().position(|s| !s.same_grid(first)) {
            return Err(Error::input(format!(
                "element {m} uses a different frequency grid from element 0"
            )));
        }
        Ok(())
    }
}

/// Unit vector in the scan plane pointing from the array toward azimuth
/// `angle_deg`, measured from the broadside (y) axis toward x.
pub fn unit_vector(angle_deg: f64) -> [f64; 3] {
    let t = angle_deg.to_radians();
    [t.sin(), t.cos(), 0.0]
}

/// Frequency used for the steering phase.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub enum Steering {
    /// Each sweep frequency steers with its own phase.
    #[default]
    TrueTimeDelay,
    /// One phase per element computed at a reference frequency.
    Narrowband { reference_freq: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AoaOptions {
    pub window: Window,
    pub pad_factor: usize,
    pub steering: Steering,
}

impl Default for AoaOptions {
    fn default() -> Self {
        Self {
            window: Window::Hann,
            pad_factor: 4,
            steering: Steering::TrueTimeDelay,
        }
    }
}

/// Complex beamformed impulse responses, one row per angle.
#[derive(Debug, Clone, PartialEq)]
pub struct AoaProfile {
    pub angles_deg: Vec<f64>,
    pub delays: Vec<f64>,
    pub response: Vec<Vec<Complex64>>,
    /// False where de-embedding masked the angle.
    pub valid: Vec<bool>,
}

/// Angle by delay power map normalized to a 0 dB peak.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AoaDelayMap {
    pub angles_deg: Vec<f64>,
    pub delays: Vec<f64>,
    pub power_db: Vec<Vec<f64>>,
    pub valid: Vec<bool>,
}

impl AoaProfile {
    pub fn to_db(&self) -> AoaDelayMap {
        let peak = self
            .response
            .iter()
            .zip(&self.valid)
            .filter(|(_, v)| **v)
            .flat_map(|(row, _)| row.iter().map(|c| c.norm_sqr()))
            .fold(0.0, f64::max);
        let power_db = self
            .response
            .iter()
            .zip(&self.valid)
            .map(|(row, &ok)| {
                row.iter()
                    .map(|c| {
                        let p = c.norm_sqr();
                        if !ok || p <= 0.0 || peak <= 0.0 {
                            PDP_FLOOR_DB
                        } else {
                            (10.0 * (p / peak).log10()).max(PDP_FLOOR_DB)
                        }
                    })
                    .collect()
            })
            .collect();
        AoaDelayMap {
            angles_deg: self.angles_deg.clone(),
            delays: self.delays.clone(),
            power_db,
            valid: self.valid.clone(),
        }
    }
}

impl AoaDelayMap {
    /// (angle index, delay index) of the global maximum.
    pub fn peak(&self) -> (usize, usize) {
        let mut best = (0, 0);
        let mut best_v = f64::NEG_INFINITY;
        for (i, row) in self.power_db.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if *v > best_v {
                    best_v = *v;
                    best = (i, j);
                }
            }
        }
        best
    }

    /// Cells at or above `min_db` that are maxima of their 8-neighbourhood.
    pub fn local_maxima(&self, min_db: f64) -> Vec<(usize, usize)> {
        let na = self.power_db.len();
        let mut out = Vec::new();
        for i in 0..na {
            let nd = self.power_db[i].len();
            for j in 0..nd {
                let v = self.power_db[i][j];
                if v < min_db {
                    continue;
                }
                let mut is_max = true;
                for di in [-1i64, 0, 1] {
                    for dj in [-1i64, 0, 1] {
                        if di == 0 && dj == 0 {
                            continue;
                        }
                        let ii = i as i64 + di;
                        if ii < 0 || ii >= na as i64 {
                            continue;
                        }
                        let jj = (j as i64 + dj).rem_euclid(nd as i64) as usize;
                        if self.power_db[ii as usize][jj] > v {
                            is_max = false;
                        }
                    }
                }
                if is_max {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Delay-and-sum beamforming over `angles_deg` followed by the delay
/// transform of each combined response.
pub fn beamform(scan: &VirtualArrayScan, angles_deg: &[f64], opts: &AoaOptions) -> Result<AoaProfile> {
    scan.validate()?;
    if angles_deg.is_empty() {
        return Err(Error::input("empty angle grid"));
    }
    if angles_deg.iter().any(|a| !a.is_finite() || a.abs() > 180.0) {
        return Err(Error::input("angles must lie in [-180, 180] degrees"));
    }
    if opts.pad_factor < 1 {
        return Err(Error::input("pad factor must be at least 1"));
    }
    if let Steering::Narrowband { reference_freq } = opts.steering {
        if !(reference_freq > 0.0) || !reference_freq.is_finite() {
            return Err(Error::domain("reference frequency must be positive"));
        }
    }
    let freqs = &scan.sweeps[0].freqs;
    let df = scan.sweeps[0].spacing();
    let m = scan.n_elements() as f64;
    let mut response = Vec::with_capacity(angles_deg.len());
    let mut delays = Vec::new();
    for &angle in angles_deg {
        let u = unit_vector(angle);
        let mut combined = vec![Complex64::new(0.0, 0.0); freqs.len()];
        for (pos, sweep) in scan.positions.iter().zip(&scan.sweeps) {
            let path = (pos[0] * u[0] + pos[1] * u[1] + pos[2] * u[2]) / SPEED_OF_LIGHT;
            for ((c, h), f) in combined.iter_mut().zip(&sweep.h).zip(freqs) {
                let fs = match opts.steering {
                    Steering::TrueTimeDelay => *f,
                    Steering::Narrowband { reference_freq } => reference_freq,
                };
                *c += h * Complex64::from_polar(1.0, -2.0 * PI * fs * path);
            }
        }
        for c in &mut combined {
            *c /= m;
        }
        let cir = response_to_cir(&combined, df, opts.window, opts.pad_factor);
        if delays.is_empty() {
            delays = cir.delays();
        }
        response.push(cir.taps);
    }
    Ok(AoaProfile {
        angles_deg: angles_deg.to_vec(),
        delays,
        valid: vec![true; angles_deg.len()],
        response,
    })
}

/// Beamformed angle by delay power map, normalized to a 0 dB peak.
pub fn aoa_delay_profile(
    scan: &VirtualArrayScan,
    angles_deg: &[f64],
    opts: &AoaOptions,
) -> Result<AoaDelayMap> {
    Ok(beamform(scan, angles_deg, opts)?.to_db())
}

/// Divide each angle row by the element pattern gain at that angle.
///
/// Rows whose gain falls more than `mask_db` below the pattern maximum are
/// marked invalid and left as they are.
pub fn deembed_pattern(scan: &VirtualArrayScan, profile: &AoaProfile, mask_db: f64) -> Result<AoaProfile> {
    let pattern = scan
        .pattern
        .as_ref()
        .ok_or_else(|| Error::input("de-embedding needs an element pattern"))?;
    let floor = pattern.peak_gain_db() + mask_db;
    let mut out = profile.clone();
    for ((row, valid), &angle) in out.response.iter_mut().zip(&mut out.valid).zip(&profile.angles_deg) {
        let (g_db, _) = pattern
            .lookup(angle)
            .ok_or_else(|| Error::input(format!("element pattern does not cover {angle} degrees")))?;
        if g_db < floor {
            *valid = false;
            continue;
        }
        let g = pattern.gain(angle).expect("covered angle");
        for v in row.iter_mut() {
            *v /= g;
        }
    }
    Ok(out)
}
