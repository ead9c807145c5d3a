use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::detector::{demodulate_candidate, ChannelFit, DetectionResult, PssCandidate};
use crate::waveform::{gen_pbch_dmrs, gen_pss, gen_sss, CellId, OfdmParams, ResourceGrid, SsbLayout};
use crate::{Error, IqCapture, Result};

const CENTRE: f64 = 120.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SignalClass {
    Pss,
    Sss,
    Dmrs,
    Pbch,
}

impl SignalClass {
    pub const ALL: [SignalClass; 4] = [SignalClass::Pss, SignalClass::Sss, SignalClass::Dmrs, SignalClass::Pbch];
}

impl fmt::Display for SignalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignalClass::Pss => "PSS",
            SignalClass::Sss => "SSS",
            SignalClass::Dmrs => "DMRS",
            SignalClass::Pbch => "PBCH",
        })
    }
}

/// Mean linear power per resource element of each SSB signal class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub struct SignalPowers {
    pub pss: f64,
    pub sss: f64,
    pub dmrs: f64,
    pub pbch: f64,
}

impl SignalPowers {
    pub fn get(&self, class: SignalClass) -> f64 {
        match class {
            SignalClass::Pss => self.pss,
            SignalClass::Sss => self.sss,
            SignalClass::Dmrs => self.dmrs,
            SignalClass::Pbch => self.pbch,
        }
    }

    pub fn max(&self) -> f64 {
        SignalClass::ALL.iter().map(|c| self.get(*c)).fold(f64::NEG_INFINITY, f64::max)
    }

    fn zip_with(self, o: SignalPowers, f: impl Fn(f64, f64) -> f64) -> SignalPowers {
        SignalPowers {
            pss: f(self.pss, o.pss),
            sss: f(self.sss, o.sss),
            dmrs: f(self.dmrs, o.dmrs),
            pbch: f(self.pbch, o.pbch),
        }
    }
}

type Obs = (usize, f64, Complex64, Complex64);

/// Despread power of one reference class after removing the fitted phase
/// slope. Elements are combined coherently within each OFDM symbol,
/// `sum y conj(r) / |r|^2`, and the symbol magnitudes are added, so a phase
/// rotation between symbols costs nothing.
fn despread(fit: &ChannelFit, obs: &[Obs]) -> f64 {
    let slope_only = ChannelFit {
        gain: Complex64::new(1.0, 0.0),
        slope: fit.slope,
    };
    let mut per_symbol = [Complex64::new(0.0, 0.0); 4];
    for (l, k, y, r) in obs {
        per_symbol[*l] += slope_only.derotate(*k, *y) * r.conj() / r.norm_sqr();
    }
    let amplitude = per_symbol.iter().map(|c| c.norm()).sum::<f64>() / obs.len() as f64;
    amplitude * amplitude
}

fn observations(grid: &ResourceGrid, pos: &[(usize, usize)], refs: &[Complex64]) -> Vec<Obs> {
    pos.iter()
        .zip(refs)
        .map(|(&(l, k), r)| (l, k as f64 - CENTRE, grid.get(l, k), *r))
        .collect()
}

/// Per-class RE power of one demodulated SSB of a known cell and index.
///
/// PSS, SSS and DM-RS are despread coherently against their reference
/// sequences, which rejects content that does not correlate with them. The
/// PBCH payload is not known to a receiver and is measured as mean `|y|^2`.
pub fn despread_grid(grid: &ResourceGrid, cell_id: CellId, i_ssb_bar: u8) -> Result<SignalPowers> {
    if grid.n_symbols() != 4 || grid.n_subcarriers() != 240 {
        return Err(Error::input("expected a 4x240 SSB grid"));
    }
    let layout = SsbLayout::for_cell(cell_id);
    let real = |v: Vec<f64>| v.into_iter().map(|x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
    let pss = observations(grid, &layout.pss, &real(gen_pss(cell_id.n2())?));
    let sss = observations(grid, &layout.sss, &real(gen_sss(cell_id.n1(), cell_id.n2())?));
    let dmrs = observations(grid, &layout.dmrs, &gen_pbch_dmrs(cell_id, i_ssb_bar)?);
    let sync: Vec<(f64, Complex64, Complex64)> = pss.iter().chain(&sss).map(|&(_, k, y, r)| (k, y, r)).collect();
    let fit = ChannelFit::fit(&sync);
    let pbch = layout.pbch.iter().map(|&(l, k)| grid.get(l, k).norm_sqr()).sum::<f64>() / layout.pbch.len() as f64;
    Ok(SignalPowers {
        pss: despread(&fit, &pss),
        sss: despread(&fit, &sss),
        dmrs: despread(&fit, &dmrs),
        pbch,
    })
}

/// Code-selective power averaged over every detected burst.
pub fn code_selective_power(
    capture: &IqCapture,
    detection: &DetectionResult,
    params: &OfdmParams,
) -> Result<SignalPowers> {
    let cell = match detection.cell_id {
        Some(c) if !detection.bursts.is_empty() => c,
        _ => return Err(Error::input("no detected bursts to measure")),
    };
    let zero = SignalPowers {
        pss: 0.0,
        sss: 0.0,
        dmrs: 0.0,
        pbch: 0.0,
    };
    let mut total = zero;
    for b in &detection.bursts {
        let cand = PssCandidate {
            n2: cell.n2(),
            timing: b.timing,
            cfo: b.cfo,
            metric: b.pss_metric,
        };
        let grid = demodulate_candidate(capture, &cand, params)?;
        total = total.zip_with(despread_grid(&grid, cell, b.i_ssb_bar)?, |a, b| a + b);
    }
    let n = detection.bursts.len() as f64;
    Ok(total.zip_with(zero, |a, _| a / n))
}
