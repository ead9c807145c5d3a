//! Independent reference models shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use wavemetro_core::sounding::{FrequencySweep, VirtualArrayScan, SPEED_OF_LIGHT};
use wavemetro_core::IqCapture;

/// Length-127 m-sequence written out as an explicit array recurrence.
fn msequence(init_x6_to_x0: [u8; 7], taps: &[usize]) -> [u8; 127] {
    let mut x = [0u8; 127 + 7];
    for (i, b) in init_x6_to_x0.iter().enumerate() {
        x[6 - i] = *b;
    }
    for i in 0..127 {
        x[i + 7] = (taps.iter().map(|t| x[i + t]).sum::<u8>() + x[i]) % 2;
    }
    let mut out = [0u8; 127];
    out.copy_from_slice(&x[..127]);
    out
}

pub fn oracle_pss(n2: u32) -> Vec<f64> {
    let x = msequence([1, 1, 1, 0, 1, 1, 0], &[4]);
    (0..127)
        .map(|n| 1.0 - 2.0 * x[((n + 43 * n2) % 127) as usize] as f64)
        .collect()
}

pub fn oracle_sss(n1: u32, n2: u32) -> Vec<f64> {
    let x0 = msequence([0, 0, 0, 0, 0, 0, 1], &[4]);
    let x1 = msequence([0, 0, 0, 0, 0, 0, 1], &[1]);
    let m0 = 15 * (n1 / 112) + 5 * n2;
    let m1 = n1 % 112;
    (0..127u32)
        .map(|n| {
            let a = 1.0 - 2.0 * x0[((n + m0) % 127) as usize] as f64;
            let b = 1.0 - 2.0 * x1[((n + m1) % 127) as usize] as f64;
            a * b
        })
        .collect()
}

/// Length-31 Gold sequence, one bit per array cell.
pub fn oracle_gold(c_init: u32, length: usize) -> Vec<u8> {
    const NC: usize = 1600;
    let total = NC + length + 31;
    let mut x1 = vec![0u8; total];
    let mut x2 = vec![0u8; total];
    x1[0] = 1;
    for i in 0..31 {
        x2[i] = ((c_init >> i) & 1) as u8;
    }
    for n in 0..(total - 31) {
        x1[n + 31] = (x1[n + 3] + x1[n]) % 2;
        x2[n + 31] = (x2[n + 3] + x2[n + 2] + x2[n + 1] + x2[n]) % 2;
    }
    (0..length).map(|n| (x1[n + NC] + x2[n + NC]) % 2).collect()
}

pub fn oracle_dmrs_c_init(cell: u32, i_ssb_bar: u32) -> u32 {
    (1 << 11) * (i_ssb_bar + 1) * (cell / 4 + 1) + (1 << 6) * (i_ssb_bar + 1) + cell % 4
}

/// PBCH DM-RS as (I sign, Q sign) pairs.
pub fn oracle_dmrs_signs(cell: u32, i_ssb_bar: u32) -> Vec<(f64, f64)> {
    let c = oracle_gold(oracle_dmrs_c_init(cell, i_ssb_bar), 288);
    (0..144)
        .map(|m| (1.0 - 2.0 * c[2 * m] as f64, 1.0 - 2.0 * c[2 * m + 1] as f64))
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cn<R: Rng>(rng: &mut R, var: f64) -> Complex64 {
    let s = (var / 2.0).sqrt();
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    Complex64::new(a * s, b * s)
}

pub fn add_noise<R: Rng>(cap: &mut IqCapture, var: f64, rng: &mut R) {
    for s in &mut cap.samples {
        *s += cn(rng, var);
    }
}

/// Frequency response of discrete paths `(amplitude, delay)` by direct
/// evaluation of `sum a exp(-j 2 pi f tau)`.
pub fn multipath_sweep(paths: &[(Complex64, f64)], f0: f64, df: f64, n: usize) -> FrequencySweep {
    let freqs: Vec<f64> = (0..n).map(|i| f0 + i as f64 * df).collect();
    let h = freqs
        .iter()
        .map(|f| paths.iter().map(|(a, tau)| a * Complex64::from_polar(1.0, -2.0 * PI * f * tau)).sum())
        .collect();
    FrequencySweep::new(freqs, h).unwrap()
}

/// Direct-summation inverse DFT of a length-`n` zero-padded to `m` buffer.
pub fn direct_idft(x: &[Complex64], m: usize) -> Vec<Complex64> {
    let n = x.len();
    (0..m)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(i, v)| v * Complex64::from_polar(1.0, 2.0 * PI * (i * k) as f64 / m as f64))
                .sum::<Complex64>()
                / n as f64
        })
        .collect()
}

pub fn ula(n: usize, spacing: f64) -> Vec<[f64; 3]> {
    (0..n)
        .map(|i| [(i as f64 - (n as f64 - 1.0) / 2.0) * spacing, 0.0, 0.0])
        .collect()
}

/// A far-field plane-wave path: arrival azimuth in degrees, delay at the
/// array origin, complex amplitude.
#[derive(Clone, Copy)]
pub struct PlaneWave {
    pub angle_deg: f64,
    pub delay: f64,
    pub amplitude: Complex64,
}

/// Element responses for plane waves, evaluated from the geometric path
/// length difference `r . (sin a, cos a, 0)` toward each source.
pub fn plane_wave_scan(
    positions: &[[f64; 3]],
    waves: &[PlaneWave],
    f0: f64,
    df: f64,
    n: usize,
    element_gain: impl Fn(f64) -> Complex64,
) -> VirtualArrayScan {
    let freqs: Vec<f64> = (0..n).map(|i| f0 + i as f64 * df).collect();
    let sweeps = positions
        .iter()
        .map(|r| {
            let h = freqs
                .iter()
                .map(|f| {
                    waves
                        .iter()
                        .map(|w| {
                            let a = w.angle_deg.to_radians();
                            let advance = (r[0] * a.sin() + r[1] * a.cos()) / SPEED_OF_LIGHT;
                            w.amplitude
                                * element_gain(w.angle_deg)
                                * Complex64::from_polar(1.0, -2.0 * PI * f * (w.delay - advance))
                        })
                        .sum()
                })
                .collect();
            FrequencySweep::new(freqs.clone(), h).unwrap()
        })
        .collect();
    VirtualArrayScan::new(positions.to_vec(), sweeps).unwrap()
}

/// Kolmogorov distribution tail `P(K > x)`.
fn kolmogorov_q(x: f64) -> f64 {
    if x < 1e-3 {
        return 1.0;
    }
    let mut s = 0.0;
    for j in 1..200 {
        let j = j as f64;
        let t = 2.0 * (-1f64).powf(j - 1.0) * (-2.0 * j * j * x * x).exp();
        s += t;
        if t.abs() < 1e-16 {
            break;
        }
    }
    s.clamp(0.0, 1.0)
}

/// Two-sample Kolmogorov-Smirnov test, asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j, mut d) = (0usize, 0usize, 0f64);
    while i < n && j < m {
        let x = a[i].min(b[j]);
        while i < n && a[i] <= x {
            i += 1;
        }
        while j < m && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let ne = (n * m) as f64 / (n + m) as f64;
    let sq = ne.sqrt();
    kolmogorov_q((sq + 0.12 + 0.11 / sq) * d)
}

/// One-sample KS test against a continuous CDF, asymptotic p-value.
pub fn ks_one_sample(x: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut x = x.to_vec();
    x.sort_by(f64::total_cmp);
    let n = x.len() as f64;
    let d = x
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let f = cdf(*v);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max);
    let sq = n.sqrt();
    kolmogorov_q((sq + 0.12 + 0.11 / sq) * d)
}

/// Least-squares alignment of each row of `est` to `truth` by one phase,
/// then relative Frobenius error.
pub fn aligned_error(est: &[Vec<Complex64>], truth: &[Vec<Complex64>]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (e, t) in est.iter().zip(truth) {
        let c: Complex64 = e.iter().zip(t).map(|(e, t)| e.conj() * t).sum();
        let phase = Complex64::from_polar(1.0, c.arg());
        for (e, t) in e.iter().zip(t) {
            num += (e * phase - t).norm_sqr();
            den += t.norm_sqr();
        }
    }
    (num / den).sqrt()
}

pub fn db(x: f64) -> f64 {
    10.0 * x.log10()
}
