//! CP-OFDM with a unitary transform.
//!
//! Subcarrier `k` of an `n`-wide grid row sits at frequency offset
//! `k - n/2` subcarriers from DC. Because the transform is unitary, the
//! energy of each symbol's useful part (CP excluded) equals the energy of the
//! grid row exactly, so the declared Parseval scale constant is 1.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{GridShape, ResourceGrid};
use crate::dsp;
use crate::{Error, IqCapture, Result};

/// Energy ratio between the CP-stripped time signal and the grid.
pub const PARSEVAL_SCALE: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OfdmParams {
    /// Numerology; subcarrier spacing is `15 * 2^mu` kHz.
    pub mu: u8,
    pub fft_size: usize,
    pub cp_len: usize,
}

impl Default for OfdmParams {
    fn default() -> Self {
        Self {
            mu: 1,
            fft_size: 256,
            cp_len: 18,
        }
    }
}

impl OfdmParams {
    pub fn new(mu: u8, fft_size: usize, cp_len: usize) -> Result<Self> {
        let p = Self { mu, fft_size, cp_len };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu > 6 {
            return Err(Error::config(format!("numerology mu must be 0..=6, got {}", self.mu)));
        }
        if !self.fft_size.is_power_of_two() || self.fft_size < 2 {
            return Err(Error::config(format!(
                "fft_size must be a power of two, got {}",
                self.fft_size
            )));
        }
        if self.cp_len >= self.fft_size {
            return Err(Error::config("cp_len must be shorter than the transform"));
        }
        Ok(())
    }

    pub fn scs(&self) -> f64 {
        15e3 * f64::from(1u32 << self.mu)
    }

    pub fn sample_rate(&self) -> f64 {
        self.fft_size as f64 * self.scs()
    }

    /// Samples per OFDM symbol including the cyclic prefix.
    pub fn symbol_len(&self) -> usize {
        self.fft_size + self.cp_len
    }

    /// Samples spanned by one SSB.
    pub fn ssb_len(&self) -> usize {
        super::SSB_SYMBOLS * self.symbol_len()
    }

    fn check_width(&self, n_subcarriers: usize) -> Result<()> {
        if n_subcarriers > self.fft_size {
            return Err(Error::config(format!(
                "fft_size {} smaller than grid width {n_subcarriers}",
                self.fft_size
            )));
        }
        Ok(())
    }

    /// Transform bin holding grid subcarrier `k` of an `n`-wide row.
    pub fn bin(&self, k: usize, n: usize) -> usize {
        let offset = k as isize - (n / 2) as isize;
        offset.rem_euclid(self.fft_size as isize) as usize
    }
}

pub fn ofdm_modulate(grid: &ResourceGrid, params: &OfdmParams) -> Result<IqCapture> {
    params.validate()?;
    let n_sc = grid.n_subcarriers();
    params.check_width(n_sc)?;
    let n = params.fft_size;
    let mut out = Vec::with_capacity(grid.n_symbols() * params.symbol_len());
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for l in 0..grid.n_symbols() {
        buf.fill(Complex64::new(0.0, 0.0));
        for (k, v) in grid.row(l).iter().enumerate() {
            buf[params.bin(k, n_sc)] = *v;
        }
        dsp::ifft_in_place(&mut buf);
        out.extend_from_slice(&buf[n - params.cp_len..]);
        out.extend_from_slice(&buf);
    }
    Ok(IqCapture::new(out, params.sample_rate()))
}

/// Recovers `shape.n_symbols` consecutive symbols whose first cyclic
/// prefix begins at `symbol_start`.
pub fn ofdm_demodulate(
    capture: &IqCapture,
    params: &OfdmParams,
    symbol_start: usize,
    shape: GridShape,
) -> Result<ResourceGrid> {
    params.validate()?;
    params.check_width(shape.n_subcarriers)?;
    let span = capture.segment(symbol_start, shape.n_symbols * params.symbol_len())?;
    Ok(demodulate_slice(span, params, shape))
}

pub(crate) fn demodulate_slice(
    span: &[Complex64],
    params: &OfdmParams,
    shape: GridShape,
) -> ResourceGrid {
    let n = params.fft_size;
    let mut data = Vec::with_capacity(shape.len());
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for l in 0..shape.n_symbols {
        let start = l * params.symbol_len() + params.cp_len;
        buf.copy_from_slice(&span[start..start + n]);
        dsp::fft_in_place(&mut buf);
        data.extend((0..shape.n_subcarriers).map(|k| buf[params.bin(k, shape.n_subcarriers)]));
    }
    ResourceGrid::from_data(shape, data).expect("shape matches")
}
