use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Time-domain complex baseband samples with their acquisition metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IqCapture {
    pub samples: Vec<Complex64>,
    pub sample_rate: f64,
    pub center_freq: f64,
    /// Linear amplitude per file unit.
    pub scale: f64,
}

impl IqCapture {
    pub fn new(samples: Vec<Complex64>, sample_rate: f64) -> Self {
        Self {
            samples,
            sample_rate,
            center_freq: 0.0,
            scale: 1.0,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sample_rate > 0.0 && self.sample_rate.is_finite()) {
            return Err(Error::input(format!(
                "sample rate must be positive, got {}",
                self.sample_rate
            )));
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::input(format!("scale must be positive, got {}", self.scale)));
        }
        if let Some(i) = self
            .samples
            .iter()
            .position(|s| !(s.re.is_finite() && s.im.is_finite()))
        {
            return Err(Error::input(format!("non-finite sample at index {i}")));
        }
        Ok(())
    }

    /// Borrow `len` samples starting at `start`, or a truncation error.
    pub fn segment(&self, start: usize, len: usize) -> Result<&[Complex64]> {
        let end = start.checked_add(len).unwrap_or(usize::MAX);
        if end > self.samples.len() {
            return Err(Error::Truncated {
                needed: end,
                available: self.samples.len(),
            });
        }
        Ok(&self.samples[start..end])
    }

    pub fn energy(&self) -> f64 {
        crate::dsp::energy(&self.samples)
    }
}
