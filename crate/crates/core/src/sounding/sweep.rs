use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dsp;
use crate::{Error, Result};

/// Frequency response recorded on a uniform frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencySweep {
    pub freqs: Vec<f64>,
    pub h: Vec<Complex64>,
    /// Acquisition time of each point, seconds.
    pub timestamps: Option<Vec<f64>>,
    /// Response of the reference path used for drift compensation.
    pub pilot: Option<Vec<Complex64>>,
}

const UNIFORM_TOL: f64 = 1e-9;

impl FrequencySweep {
    pub fn new(freqs: Vec<f64>, h: Vec<Complex64>) -> Result<Self> {
        let s = Self {
            freqs,
            h,
            timestamps: None,
            pilot: None,
        };
        s.validate()?;
        Ok(s)
    }

    /// Uniform grid `start + i*step` for `i in 0..n`.
    pub fn uniform_freqs(start: f64, step: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| start + i as f64 * step).collect()
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        (self.freqs[self.len() - 1] - self.freqs[0]) / (self.len() - 1) as f64
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.freqs.len();
        if n < 2 {
            return Err(Error::input(format!("sweep needs at least 2 points, got {n}")));
        }
        if self.h.len() != n {
            return Err(Error::input(format!("{} responses for {n} frequencies", self.h.len())));
        }
        if let Some(p) = &self.pilot {
            if p.len() != n {
                return Err(Error::input(format!("{} pilot values for {n} frequencies", p.len())));
            }
        }
        if let Some(t) = &self.timestamps {
            if t.len() != n {
                return Err(Error::input(format!("{} timestamps for {n} frequencies", t.len())));
            }
        }
        if self.freqs.iter().any(|f| !f.is_finite()) {
            return Err(Error::input("non-finite frequency"));
        }
        if self.h.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::input("non-finite response value"));
        }
        let df = self.spacing();
        if df <= 0.0 {
            return Err(Error::input("frequencies must be strictly increasing"));
        }
        for (i, w) in self.freqs.windows(2).enumerate() {
            let step = w[1] - w[0];
            if step <= 0.0 {
                return Err(Error::input(format!("frequencies not increasing at point {}", i + 1)));
            }
            let tol = UNIFORM_TOL * df + 4.0 * f64::EPSILON * w[1].abs();
            if (step - df).abs() > tol {
                return Err(Error::input(format!(
                    "non-uniform frequency grid at point {}: step {step} vs mean {df}",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// True when both sweeps use the same frequency grid.
    pub fn same_grid(&self, other: &FrequencySweep) -> bool {
        self.len() == other.len()
            && self
                .freqs
                .iter()
                .zip(&other.freqs)
                .all(|(a, b)| (a - b).abs() <= UNIFORM_TOL * self.spacing())
    }
}

/// Taper applied across the sweep before the delay transform.
///
/// The periodic (DFT-even) forms are used, so an on-grid path produces
/// exact zeros beyond the main lobe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    Rectangular,
    #[default]
    Hann,
    Hamming,
}

impl Window {
    pub fn coefficients(self, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| {
                let x = 2.0 * PI * i as f64 / n as f64;
                match self {
                    Window::Rectangular => 1.0,
                    Window::Hann => 0.5 - 0.5 * x.cos(),
                    Window::Hamming => 0.54 - 0.46 * x.cos(),
                }
            })
            .collect()
    }
}

impl FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rectangular" | "rect" | "none" => Ok(Window::Rectangular),
            "hann" | "hanning" => Ok(Window::Hann),
            "hamming" => Ok(Window::Hamming),
            other => Err(Error::input(format!(
                "unknown window '{other}' (expected rectangular, hann or hamming)"
            ))),
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Window::Rectangular => "rectangular",
            Window::Hann => "hann",
            Window::Hamming => "hamming",
        })
    }
}

/// Channel impulse response on a uniform delay axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cir {
    pub taps: Vec<Complex64>,
    /// Physical delay resolution, `1/(N*df)`.
    pub delay_resolution: f64,
    /// Spacing between taps; smaller than the resolution when zero-padded.
    pub bin_spacing: f64,
    /// Unambiguous delay range, `1/df`.
    pub max_delay: f64,
    pub pad_factor: usize,
}

impl Cir {
    /// A CIR given directly as taps on a `bin_spacing` grid.
    pub fn from_taps(taps: Vec<Complex64>, bin_spacing: f64) -> Self {
        let n = taps.len() as f64;
        Self {
            taps,
            delay_resolution: bin_spacing,
            bin_spacing,
            max_delay: n * bin_spacing,
            pad_factor: 1,
        }
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    pub fn delays(&self) -> Vec<f64> {
        (0..self.taps.len()).map(|k| k as f64 * self.bin_spacing).collect()
    }

    /// Number of sweep points this CIR was computed from.
    pub fn n_points(&self) -> usize {
        self.taps.len() / self.pad_factor.max(1)
    }

    /// Forward transform back to the (windowed, gain-compensated) sweep.
    pub fn to_frequency_response(&self) -> Vec<Complex64> {
        let m = self.taps.len();
        let n = self.n_points();
        let scale = n as f64 / (m as f64).sqrt();
        let mut buf = dsp::fft(&self.taps);
        buf.truncate(n);
        for v in &mut buf {
            *v *= scale;
        }
        buf
    }

    pub fn peak_index(&self) -> Option<usize> {
        self.taps
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .map(|(i, _)| i)
    }
}

/// Windowed, zero-padded inverse transform of a sweep.
///
/// The window is divided by its coherent gain (its mean), so a single path
/// of amplitude `a` peaks at `a` whatever the window.
pub fn sweep_to_cir(sweep: &FrequencySweep, window: Window, pad_factor: usize) -> Result<Cir> {
    sweep.validate()?;
    if pad_factor < 1 {
        return Err(Error::input("pad factor must be at least 1"));
    }
    Ok(response_to_cir(&sweep.h, sweep.spacing(), window, pad_factor))
}

pub(crate) fn response_to_cir(h: &[Complex64], df: f64, window: Window, pad_factor: usize) -> Cir {
    let n = h.len();
    let m = n * pad_factor;
    let w = window.coefficients(n);
    let gain = w.iter().sum::<f64>() / n as f64;
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for ((b, hv), wv) in buf.iter_mut().zip(h).zip(&w) {
        *b = hv * (wv / gain);
    }
    dsp::ifft_in_place(&mut buf);
    let scale = (m as f64).sqrt() / n as f64;
    for v in &mut buf {
        *v *= scale;
    }
    Cir {
        taps: buf,
        delay_resolution: 1.0 / (n as f64 * df),
        bin_spacing: 1.0 / (m as f64 * df),
        max_delay: 1.0 / df,
        pad_factor,
    }
}
