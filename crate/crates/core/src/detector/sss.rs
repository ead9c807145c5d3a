use std::sync::OnceLock;

use num_complex::Complex64;

use super::chanest::ChannelFit;
use super::pss::{ssb_span, PssCandidate};
use crate::dsp;
use crate::waveform::{gen_pss, gen_sss, CellId, GridShape, OfdmParams, ResourceGrid};
use crate::waveform::{SSB_SUBCARRIERS, SSB_SYMBOLS};
use crate::{Error, IqCapture, Result};

const SYNC_START: usize = 56;
pub(crate) const CENTRE: f64 = (SSB_SUBCARRIERS / 2) as f64;

/// Every SSS, indexed by cell identity.
fn sss_table() -> &'static [Vec<f64>] {
    static TABLE: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        CellId::all()
            .map(|c| gen_sss(c.n1(), c.n2()).expect("valid cell"))
            .collect()
    })
}

pub(crate) fn check_ssb_grid(grid: &ResourceGrid) -> Result<()> {
    if grid.shape() != GridShape::SSB {
        return Err(Error::input(format!(
            "expected a {SSB_SYMBOLS}x{SSB_SUBCARRIERS} SSB grid, got {}x{}",
            grid.n_symbols(),
            grid.n_subcarriers()
        )));
    }
    Ok(())
}

/// Observations of a length-127 sync sequence on symbol `l` of an SSB grid.
pub(crate) fn sync_obs(grid: &ResourceGrid, l: usize, seq: &[f64]) -> Vec<(f64, Complex64, Complex64)> {
    seq.iter()
        .enumerate()
        .map(|(i, &s)| {
            let k = SYNC_START + i;
            (k as f64 - CENTRE, grid.get(l, k), Complex64::new(s, 0.0))
        })
        .collect()
}

/// Demodulates the SSB at a candidate's timing after removing its CFO.
pub fn demodulate_candidate(
    capture: &IqCapture,
    cand: &PssCandidate,
    params: &OfdmParams,
) -> Result<ResourceGrid> {
    let span = ssb_span(params);
    let seg = capture.segment(cand.timing, span).map_err(|_| {
        Error::input(format!(
            "candidate at sample {} needs {span} samples but the capture has {}",
            cand.timing,
            capture.len()
        ))
    })?;
    let mut seg = seg.to_vec();
    dsp::rotate(&mut seg, -cand.cfo, params.sample_rate(), 0);
    Ok(crate::waveform::ofdm::demodulate_slice(&seg, params, GridShape::SSB))
}

/// SSS group of the SSB at `cand`, with its normalized metric.
pub fn detect_sss(capture: &IqCapture, cand: &PssCandidate, params: &OfdmParams) -> Result<(u16, f64)> {
    let grid = demodulate_candidate(capture, cand, params)?;
    sss_from_grid(&grid, cand.n2)
}

/// Correlates the SSS symbol against the 336 groups of sector `n2`.
///
/// The phase slope across subcarriers is fitted on the PSS elements and
/// removed from the SSS elements before correlation. The common phase of
/// the SSS symbol is left free, since a residual frequency offset rotates
/// it relative to the PSS symbol. The metric is
/// `|sum z*s| / sqrt(127 * sum |z|^2)`, which lies in [0, 1].
pub fn sss_from_grid(grid: &ResourceGrid, n2: u8) -> Result<(u16, f64)> {
    check_ssb_grid(grid)?;
    let pss = gen_pss(n2)?;
    let fit = ChannelFit::fit(&sync_obs(grid, 0, &pss));
    let z: Vec<Complex64> = (0..127)
        .map(|i| {
            let k = SYNC_START + i;
            fit.derotate(k as f64 - CENTRE, grid.get(2, k))
        })
        .collect();
    let norm = (127.0 * dsp::energy(&z)).sqrt();
    let table = sss_table();
    let mut best = (0u16, f64::NEG_INFINITY);
    for n1 in 0..336u16 {
        let s = &table[3 * n1 as usize + n2 as usize];
        let c = z.iter().zip(s).map(|(z, s)| z * s).sum::<Complex64>().norm();
        if c > best.1 {
            best = (n1, c);
        }
    }
    let metric = if norm > 0.0 {
        (best.1 / norm).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok((best.0, metric))
}
