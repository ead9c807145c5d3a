use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_threshold, DEFAULT_THRESHOLD};
use crate::dsp;
use crate::waveform::{gen_pss, ofdm_modulate, GridShape, OfdmParams, ReKind, ResourceGrid};
use crate::waveform::{SSB_SUBCARRIERS, SSB_SYMBOLS};
use crate::{Error, IqCapture, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PssCandidate {
    pub n2: u8,
    /// First sample of the SSB (start of the PSS symbol's cyclic prefix).
    pub timing: usize,
    /// Carrier frequency offset estimate, Hz.
    pub cfo: f64,
    /// Normalized correlation, in [0, 1].
    pub metric: f64,
}

/// Time-domain PSS search over the three sector hypotheses and a bank of
/// frequency-offset hypotheses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PssSearch {
    pub threshold: f64,
    /// Half-width of the CFO bank, in subcarrier spacings.
    pub cfo_span_scs: f64,
    /// Spacing of the CFO bank, in subcarrier spacings.
    pub cfo_step_scs: f64,
}

impl Default for PssSearch {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_THRESHOLD,
            cfo_span_scs: 1.0,
            cfo_step_scs: 0.5,
        }
    }
}

/// Useful part (CP excluded) of the OFDM symbol carrying PSS `n2`, placed
/// as in an SSB centred on DC.
pub fn pss_replica(n2: u8, params: &OfdmParams) -> Result<Vec<Complex64>> {
    let mut grid = ResourceGrid::zeros(GridShape {
        n_symbols: 1,
        n_subcarriers: SSB_SUBCARRIERS,
    });
    for (i, v) in gen_pss(n2)?.into_iter().enumerate() {
        grid.set(0, 56 + i, Complex64::new(v, 0.0), ReKind::Pss);
    }
    let sym = ofdm_modulate(&grid, params)?;
    Ok(sym.samples[params.cp_len..].to_vec())
}

/// All PSS candidates with normalized metric at or above `threshold`.
pub fn detect_pss(
    capture: &IqCapture,
    params: &OfdmParams,
    threshold: f64,
) -> Result<Vec<PssCandidate>> {
    PssSearch {
        threshold,
        ..PssSearch::default()
    }
    .run(capture, params)
}

/// Windows with less energy than this fraction of the strongest window are
/// treated as silence (metric 0).
const SILENCE_FLOOR: f64 = 1e-9;

struct Hypothesis {
    n2: u8,
    cfo: f64,
    spectrum: Vec<Complex64>,
}

impl PssSearch {
    fn cfo_bank(&self, scs: f64) -> Vec<f64> {
        if self.cfo_step_scs <= 0.0 || self.cfo_span_scs <= 0.0 {
            return vec![0.0];
        }
        let half = (self.cfo_span_scs / self.cfo_step_scs).floor() as i64;
        (-half..=half)
            .map(|i| i as f64 * self.cfo_step_scs * scs)
            .collect()
    }

    pub fn run(&self, capture: &IqCapture, params: &OfdmParams) -> Result<Vec<PssCandidate>> {
        check_threshold(self.threshold)?;
        params.validate()?;
        if capture.is_empty() {
            return Err(Error::input("empty capture"));
        }
        let n = params.fft_size;
        let len = capture.len();
        if len < n {
            return Err(Error::input(format!(
                "capture of {len} samples is shorter than one OFDM symbol ({n})"
            )));
        }
        let fs = params.sample_rate();
        let fft_len = (len + n).next_power_of_two();
        let sqrt_m = (fft_len as f64).sqrt();

        let mut y = capture.samples.clone();
        y.resize(fft_len, Complex64::new(0.0, 0.0));
        dsp::fft_in_place(&mut y);

        let replicas: Vec<Vec<Complex64>> = (0..3)
            .map(|n2| pss_replica(n2, params))
            .collect::<Result<_>>()?;
        let replica_energy = dsp::energy(&replicas[0]);

        let mut hyps = Vec::new();
        for (n2, rep) in replicas.iter().enumerate() {
            for cfo in self.cfo_bank(params.scs()) {
                let mut p = rep.clone();
                dsp::rotate(&mut p, cfo, fs, 0);
                p.resize(fft_len, Complex64::new(0.0, 0.0));
                dsp::fft_in_place(&mut p);
                hyps.push(Hypothesis {
                    n2: n2 as u8,
                    cfo,
                    spectrum: p,
                });
            }
        }

        // Sliding window energy via prefix sums.
        let mut prefix = Vec::with_capacity(len + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for s in &capture.samples {
            acc += s.norm_sqr();
            prefix.push(acc);
        }
        let n_pos = len - n + 1;
        let window: Vec<f64> = (0..n_pos).map(|t| (prefix[t + n] - prefix[t]).max(0.0)).collect();
        let floor = SILENCE_FLOOR * window.iter().cloned().fold(0.0, f64::max);

        let mut best = vec![0.0f64; n_pos];
        let mut best_hyp = vec![0usize; n_pos];
        let mut buf = vec![Complex64::new(0.0, 0.0); fft_len];
        for (h, hyp) in hyps.iter().enumerate() {
            for ((b, yv), pv) in buf.iter_mut().zip(&y).zip(&hyp.spectrum) {
                *b = yv * pv.conj();
            }
            dsp::ifft_in_place(&mut buf);
            for t in 0..n_pos {
                let e = window[t];
                if e <= floor || e == 0.0 {
                    continue;
                }
                let c = buf[t] * sqrt_m;
                let m = (c.norm_sqr() / (e * replica_energy)).min(1.0);
                if m > best[t] {
                    best[t] = m;
                    best_hyp[t] = h;
                }
            }
        }

        // Non-maximum suppression over one OFDM symbol.
        let mut above: Vec<usize> = (0..n_pos).filter(|&t| best[t] >= self.threshold).collect();
        above.sort_by(|&a, &b| best[b].total_cmp(&best[a]).then(a.cmp(&b)));
        let guard = params.symbol_len();
        let mut kept = BTreeSet::new();
        for t in above {
            let lo = t.saturating_sub(guard - 1);
            if kept.range(lo..t + guard).next().is_none() {
                kept.insert(t);
            }
        }

        let mut out = Vec::new();
        for t in kept {
            if t < params.cp_len {
                continue;
            }
            let hyp = &hyps[best_hyp[t]];
            let rep = &replicas[hyp.n2 as usize];
            let residual = refine_cfo(&capture.samples[t..t + n], rep, hyp.cfo, fs);
            out.push(PssCandidate {
                n2: hyp.n2,
                timing: t - params.cp_len,
                cfo: hyp.cfo + residual,
                metric: best[t],
            });
        }
        Ok(out)
    }
}

/// Residual frequency offset from the phase advance between the replica
/// correlations of the two half-symbols, after removing `coarse`.
fn refine_cfo(segment: &[Complex64], replica: &[Complex64], coarse: f64, fs: f64) -> f64 {
    let n = replica.len();
    let half = n / 2;
    let step = -2.0 * std::f64::consts::PI * coarse / fs;
    let mut c = [Complex64::new(0.0, 0.0); 2];
    let mut w = [0.0; 2];
    let mut centroid = [0.0; 2];
    for (i, (y, p)) in segment.iter().zip(replica).enumerate() {
        let h = usize::from(i >= half);
        c[h] += y * p.conj() * Complex64::from_polar(1.0, step * i as f64);
        let e = p.norm_sqr();
        w[h] += e;
        centroid[h] += e * i as f64;
    }
    let spacing = centroid[1] / w[1] - centroid[0] / w[0];
    let phase = (c[1] * c[0].conj()).arg();
    phase * fs / (2.0 * std::f64::consts::PI * spacing)
}

/// Samples needed from a candidate's timing to demodulate a full SSB.
pub(crate) fn ssb_span(params: &OfdmParams) -> usize {
    SSB_SYMBOLS * params.symbol_len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveform::{synthesize_ssb_bursts, CellId, SsbConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn capture_with_ssb(cell: u16, lead_in: usize) -> IqCapture {
        let cfg = SsbConfig::new(CellId::from_cell(cell).unwrap());
        synthesize_ssb_bursts(&cfg, &OfdmParams::default(), lead_in, 1500).unwrap()
    }

    #[test]
    fn noiseless_single_ssb() {
        let p = OfdmParams::default();
        let cap = capture_with_ssb(0, 1000);
        let c = detect_pss(&cap, &p, DEFAULT_THRESHOLD).unwrap();
        assert_eq!(c.len(), 1, "{c:?}");
        assert_eq!(c[0].n2, 0);
        assert_eq!(c[0].timing, 1000);
        assert!(c[0].metric > 0.99);
        assert!(c[0].cfo.abs() < 1.0);
    }

    #[test]
    fn cfo_half_subcarrier() {
        let p = OfdmParams::default();
        let mut cap = capture_with_ssb(4, 700);
        let cfo = 0.5 * p.scs();
        dsp::rotate(&mut cap.samples, cfo, p.sample_rate(), 0);
        let c = detect_pss(&cap, &p, DEFAULT_THRESHOLD).unwrap();
        assert_eq!(c.len(), 1, "{c:?}");
        assert_eq!(c[0].n2, 1);
        assert_eq!(c[0].timing, 700);
        assert!((c[0].cfo - cfo).abs() < 0.05 * p.scs(), "cfo {}", c[0].cfo);
    }

    #[test]
    fn white_noise_at_half_threshold() {
        let p = OfdmParams::default();
        let mut hits = 0;
        for trial in 0..100u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(trial);
            let samples = (0..100_000)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex64::new(re, im)
                })
                .collect();
            let cap = IqCapture::new(samples, p.sample_rate());
            if !detect_pss(&cap, &p, 0.5).unwrap().is_empty() {
                hits += 1;
            }
        }
        assert!(hits <= 1, "{hits} false alarms");
    }

    #[test]
    fn input_errors() {
        let p = OfdmParams::default();
        let empty = IqCapture::new(vec![], p.sample_rate());
        assert!(matches!(detect_pss(&empty, &p, 0.5), Err(Error::Input(_))));
        let short = IqCapture::new(vec![Complex64::new(1.0, 0.0); 10], p.sample_rate());
        assert!(matches!(detect_pss(&short, &p, 0.5), Err(Error::Input(_))));
        let cap = capture_with_ssb(0, 100);
        assert!(matches!(detect_pss(&cap, &p, 1.5), Err(Error::Domain(_))));
    }
}
