use num_complex::Complex64;

use super::grid::{map_ssb, SsbConfig};
use super::ofdm::{ofdm_modulate, OfdmParams};
use crate::{IqCapture, Result};

/// Start sample of every burst when the first begins at `lead_in`.
pub fn burst_timings(cfg: &SsbConfig, lead_in: usize) -> Vec<usize> {
    (0..cfg.burst_count)
        .map(|b| lead_in + b * cfg.burst_period)
        .collect()
}

/// Noiseless capture of `cfg.burst_count` SSBs.
///
/// Burst `b` starts at `lead_in + b * burst_period` and carries DM-RS index
/// `(i_ssb_bar + b) mod l_max`. `tail` zero samples follow the last burst.
pub fn synthesize_ssb_bursts(
    cfg: &SsbConfig,
    params: &OfdmParams,
    lead_in: usize,
    tail: usize,
) -> Result<IqCapture> {
    params.validate()?;
    cfg.validate(params.ssb_len())?;
    let body = match cfg.burst_count {
        0 => 0,
        n => (n - 1) * cfg.burst_period + params.ssb_len(),
    };
    let mut samples = vec![Complex64::new(0.0, 0.0); lead_in + body + tail];
    for (b, start) in burst_timings(cfg, lead_in).into_iter().enumerate() {
        let burst_cfg = SsbConfig {
            i_ssb_bar: cfg.burst_index(b),
            ..cfg.clone()
        };
        let block = ofdm_modulate(&map_ssb(&burst_cfg)?, params)?;
        for (dst, src) in samples[start..].iter_mut().zip(&block.samples) {
            *dst += src;
        }
    }
    Ok(IqCapture::new(samples, params.sample_rate()))
}
