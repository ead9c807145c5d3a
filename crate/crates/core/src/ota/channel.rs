use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::rc::FadingRealization;
use crate::{dsp, Error, IqCapture, Result};

/// Draw from CN(0, `variance`).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

/// Per-sample noise variance giving `snr_db` per resource element for REs
/// of power `re_power` (unitary transforms keep the two equal).
pub fn noise_power_for_snr(re_power: f64, snr_db: f64) -> f64 {
    re_power * dsp::from_db10(-snr_db)
}

/// Add complex white Gaussian noise of variance `noise_power` per sample.
pub fn add_awgn<R: Rng + ?Sized>(capture: &mut IqCapture, noise_power: f64, rng: &mut R) {
    if noise_power <= 0.0 {
        return;
    }
    for s in &mut capture.samples {
        *s += complex_gaussian(rng, noise_power);
    }
}

/// Apply a carrier frequency offset of `cfo_hz`.
pub fn apply_cfo(capture: &mut IqCapture, cfo_hz: f64) {
    let fs = capture.sample_rate;
    dsp::rotate(&mut capture.samples, cfo_hz, fs, 0);
}

const DELAY_TOL: f64 = 1e-6;

/// Tapped-delay-line convolution. The output keeps the input length.
pub fn apply_channel(capture: &IqCapture, taps: &FadingRealization) -> Result<IqCapture> {
    capture.validate()?;
    taps.validate()?;
    let fs = capture.sample_rate;
    let mut shifts = Vec::with_capacity(taps.taps.len());
    for (k, tap) in taps.taps.iter().enumerate() {
        let d = tap.delay * fs;
        let r = d.round();
        if (d - r).abs() > DELAY_TOL {
            return Err(Error::input(format!(
                "tap {k} delay {} s is {d} samples, not a whole number at {fs} Hz",
                tap.delay
            )));
        }
        shifts.push((r as usize, tap.gain));
    }
    let n = capture.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (d, g) in shifts {
        if d >= n {
            continue;
        }
        for (o, s) in out[d..].iter_mut().zip(&capture.samples) {
            *o += g * s;
        }
    }
    Ok(IqCapture {
        samples: out,
        ..capture.clone()
    })
}
