use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::channel::complex_gaussian;
use crate::sounding::Cir;
use crate::{dsp, Error, Result};

/// Reverberation-chamber tapped-delay model with exponential power decay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RcChannelModel {
    /// Decay constant, seconds.
    pub tau_rc: f64,
    pub n_taps: usize,
    /// Seconds between taps.
    pub tap_spacing: f64,
    /// Double-Rayleigh taps.
    pub keyhole: bool,
    pub seed: u64,
}

impl RcChannelModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau_rc > 0.0) || !self.tau_rc.is_finite() {
            return Err(Error::domain(format!("tau_rc must be positive, got {}", self.tau_rc)));
        }
        if self.n_taps < 1 {
            return Err(Error::domain("n_taps must be at least 1"));
        }
        if !(self.tap_spacing > 0.0) || !self.tap_spacing.is_finite() {
            return Err(Error::domain(format!(
                "tap_spacing must be positive, got {}",
                self.tap_spacing
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tap {
    /// Seconds.
    pub delay: f64,
    pub gain: Complex64,
}

/// One draw of a tapped-delay-line channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FadingRealization {
    pub taps: Vec<Tap>,
}

impl FadingRealization {
    pub fn validate(&self) -> Result<()> {
        for (k, t) in self.taps.iter().enumerate() {
            if !(t.delay >= 0.0) || !t.delay.is_finite() {
                return Err(Error::input(format!("tap {k} has an invalid delay {}", t.delay)));
            }
            if k > 0 && t.delay <= self.taps[k - 1].delay {
                return Err(Error::input(format!("tap {k} delay is not increasing")));
            }
            if !(t.gain.re.is_finite() && t.gain.im.is_finite()) {
                return Err(Error::input(format!("tap {k} has a non-finite gain")));
            }
        }
        Ok(())
    }

    pub fn total_power(&self) -> f64 {
        self.taps.iter().map(|t| t.gain.norm_sqr()).sum()
    }

    /// Impulse response on a `bin_spacing` grid of `len` bins.
    pub fn to_cir(&self, bin_spacing: f64, len: usize) -> Result<Cir> {
        self.validate()?;
        let mut taps = vec![Complex64::new(0.0, 0.0); len];
        for (k, t) in self.taps.iter().enumerate() {
            let b = t.delay / bin_spacing;
            let r = b.round();
            if (b - r).abs() > 1e-6 {
                return Err(Error::input(format!("tap {k} is off the {bin_spacing} s grid")));
            }
            let r = r as usize;
            if r >= len {
                return Err(Error::input(format!("tap {k} lies beyond {len} bins")));
            }
            taps[r] += t.gain;
        }
        Ok(Cir::from_taps(taps, bin_spacing))
    }
}

/// Mean tap powers `exp(-k*spacing/tau)` normalized to unit sum.
pub fn rc_power_profile(model: &RcChannelModel) -> Vec<f64> {
    let raw: Vec<f64> = (0..model.n_taps)
        .map(|k| (-(k as f64) * model.tap_spacing / model.tau_rc).exp())
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|p| p / total).collect()
}

/// Seeded draw of the chamber response.
pub fn simulate_rc_channel(model: &RcChannelModel) -> Result<FadingRealization> {
    model.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    let taps = rc_power_profile(model)
        .into_iter()
        .enumerate()
        .map(|(k, p)| {
            let g = if model.keyhole {
                complex_gaussian(&mut rng, 1.0) * complex_gaussian(&mut rng, 1.0)
            } else {
                complex_gaussian(&mut rng, 1.0)
            };
            Tap {
                delay: k as f64 * model.tap_spacing,
                gain: g * p.sqrt(),
            }
        })
        .collect();
    Ok(FadingRealization { taps })
}

/// Noise gain above which a cancellation is flagged, dB.
pub const NOISE_GAIN_BOUND_DB: f64 = 20.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cancellation {
    pub cir: Cir,
    /// White-noise power gain of the inverse filter relative to a flat
    /// reference of the same energy, dB.
    pub noise_gain_db: f64,
    pub noise_amplified: bool,
}

/// Regularized frequency-domain deconvolution of `measured` by `reference`.
///
/// With `H = DFT(taps)` (unnormalized), the corrected response is
/// `H_meas * conj(H_ref) / (|H_ref|^2 + epsilon)`. A unit impulse reference
/// therefore returns the measurement scaled by `1/(1 + epsilon)`.
pub fn cancel_rc_decay(measured: &Cir, reference: &Cir, epsilon: f64) -> Result<Cancellation> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::domain(format!("epsilon must be positive, got {epsilon}")));
    }
    if measured.len() != reference.len() || measured.is_empty() {
        return Err(Error::input(format!(
            "measured ({}) and reference ({}) must have the same nonzero length",
            measured.len(),
            reference.len()
        )));
    }
    let n = measured.len() as f64;
    let root = n.sqrt();
    let hm = dsp::fft(&measured.taps);
    let hr = dsp::fft(&reference.taps);
    let mut out = Vec::with_capacity(hm.len());
    let mut w_power = 0.0;
    let mut r_power = 0.0;
    for (m, r) in hm.iter().zip(&hr) {
        let r = r * root;
        let w = r.conj() / (r.norm_sqr() + epsilon);
        w_power += w.norm_sqr();
        r_power += r.norm_sqr();
        out.push(m * w);
    }
    dsp::ifft_in_place(&mut out);
    let noise_gain_db = dsp::db10((w_power / n) * (r_power / n));
    Ok(Cancellation {
        cir: Cir {
            taps: out,
            ..measured.clone()
        },
        noise_gain_db,
        noise_amplified: noise_gain_db > NOISE_GAIN_BOUND_DB,
    })
}
