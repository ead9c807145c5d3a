//! Monte Carlo calibration of the detection thresholds.
//!
//! Noise-only captures of 10^5 samples give the false-alarm side; single-SSB
//! captures at -6 dB per-RE SNR give the detection side. For each pair of
//! PSS threshold and SSS confirmation threshold the table lists the
//! fraction of noise captures with a confirmed detection and the fraction
//! of signal captures whose true cell passes both stages.
//!
//! Usage: cargo run --release -p wavemetro-core --example calibrate_threshold [TRIALS]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavemetro_core::detector::{detect_pss, detect_sss, PssCandidate};
use wavemetro_core::ota::{add_awgn, noise_power_for_snr};
use wavemetro_core::waveform::synthesize_ssb_bursts;
use wavemetro_core::{CellId, Complex64, IqCapture, OfdmParams, SsbConfig};

const FLOOR: f64 = 0.04;
const PSS_GRID: [f64; 6] = [0.05, 0.055, 0.06, 0.065, 0.07, 0.08];
const SSS_GRID: [f64; 6] = [0.0, 0.25, 0.28, 0.3, 0.32, 0.35];

/// (pss metric, sss metric, decoded cell) of every merged candidate.
fn scored(cap: &IqCapture, params: &OfdmParams) -> Vec<(f64, f64, u16)> {
    let mut cands = detect_pss(cap, params, FLOOR).expect("search");
    cands.sort_by(|a, b| b.metric.total_cmp(&a.metric));
    let mut kept: Vec<PssCandidate> = Vec::new();
    for c in cands {
        if kept.iter().all(|k| k.timing.abs_diff(c.timing) >= params.ssb_len()) {
            kept.push(c);
        }
    }
    kept.iter()
        .filter_map(|c| {
            let (n1, m) = detect_sss(cap, c, params).ok()?;
            Some((c.metric, m, 3 * n1 + c.n2 as u16))
        })
        .collect()
}

fn main() {
    let trials: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1000);
    let params = OfdmParams::default();

    let mut noise = Vec::new();
    let mut pss_peaks = Vec::new();
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE + trial);
        let mut cap = IqCapture::new(vec![Complex64::new(0.0, 0.0); 100_000], params.sample_rate());
        add_awgn(&mut cap, 1.0, &mut rng);
        let s = scored(&cap, &params);
        pss_peaks.push(s.iter().map(|c| c.0).fold(0.0, f64::max));
        noise.push(s);
    }

    let mut signal = Vec::new();
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF + trial);
        let cell = CellId::from_cell(rng.random_range(0..1008)).unwrap();
        let cfg = SsbConfig::new(cell);
        let mut cap = synthesize_ssb_bursts(&cfg, &params, rng.random_range(200..1200), 800).unwrap();
        add_awgn(&mut cap, noise_power_for_snr(cfg.re_power, -6.0), &mut rng);
        signal.push((cell.cell(), scored(&cap, &params)));
    }

    pss_peaks.sort_by(f64::total_cmp);
    let n = trials as usize;
    println!("trials {trials}");
    println!(
        "noise-only PSS peak: median {:.4}, 99th pct {:.4}, max {:.4}",
        pss_peaks[n / 2],
        pss_peaks[(n * 99 / 100).min(n - 1)],
        pss_peaks[n - 1]
    );
    println!("gamma_pss gamma_sss  false_alarm  detection(-6 dB)");
    for gp in PSS_GRID {
        for gs in SSS_GRID {
            let fa = noise
                .iter()
                .filter(|s| s.iter().any(|c| c.0 >= gp && c.1 >= gs))
                .count();
            let pd = signal
                .iter()
                .filter(|(cell, s)| s.iter().any(|c| c.0 >= gp && c.1 >= gs && c.2 == *cell))
                .count();
            println!(
                "{gp:9.3} {gs:9.2}  {:11.4}  {:.4}",
                fa as f64 / trials as f64,
                pd as f64 / trials as f64
            );
        }
    }
}
