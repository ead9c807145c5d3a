//! Fixtures shared by the pipeline benchmarks.

use std::f64::consts::PI;

use wavemetro_core::sounding::{unit_vector, FrequencySweep, VirtualArrayScan, SPEED_OF_LIGHT};
use wavemetro_core::waveform::synthesize_ssb_bursts;
use wavemetro_core::{CellId, Complex64, IqCapture, OfdmParams, SsbConfig};

/// Noiseless capture of `bursts` SSBs of cell 3 with a 500-sample lead-in.
pub fn ssb_capture(bursts: usize) -> IqCapture {
    let cfg = SsbConfig {
        burst_count: bursts,
        ..SsbConfig::new(CellId::from_cell(3).expect("valid cell"))
    };
    synthesize_ssb_bursts(&cfg, &OfdmParams::default(), 500, 500).expect("valid config")
}

/// Two-path sweep of `n` points from 28 GHz in 10 MHz steps.
pub fn two_path_sweep(n: usize) -> FrequencySweep {
    let freqs = FrequencySweep::uniform_freqs(28e9, 10e6, n);
    let h = freqs
        .iter()
        .map(|f| Complex64::from_polar(1.0, -2.0 * PI * f * 5e-9) + Complex64::from_polar(0.5, -2.0 * PI * f * 40e-9))
        .collect();
    FrequencySweep::new(freqs, h).expect("uniform grid")
}

/// Half-wavelength linear array of `elements` receiving one plane wave
/// from 30 degrees.
pub fn plane_wave_scan(elements: usize, points: usize) -> VirtualArrayScan {
    let f0 = 28e9;
    let spacing = SPEED_OF_LIGHT / f0 / 2.0;
    let u = unit_vector(30.0);
    let freqs = FrequencySweep::uniform_freqs(f0, 10e6, points);
    let positions: Vec<[f64; 3]> = (0..elements)
        .map(|m| [(m as f64 - (elements as f64 - 1.0) / 2.0) * spacing, 0.0, 0.0])
        .collect();
    let sweeps = positions
        .iter()
        .map(|p| {
            let lead = (p[0] * u[0] + p[1] * u[1]) / SPEED_OF_LIGHT;
            let h = freqs
                .iter()
                .map(|f| Complex64::from_polar(1.0, -2.0 * PI * f * (10e-9 - lead)))
                .collect();
            FrequencySweep::new(freqs.clone(), h).expect("uniform grid")
        })
        .collect();
    VirtualArrayScan::new(positions, sweeps).expect("consistent scan")
}
