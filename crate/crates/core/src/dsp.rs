//! Unitary discrete Fourier transforms and small complex-vector helpers.
//!
//! Every transform here is scaled by `1/sqrt(N)` in both directions, so
//! `ifft(fft(x)) == x` and energy is preserved exactly (up to rounding).

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn transform(buf: &mut [Complex64], inverse: bool) {
    let n = buf.len();
    if n == 0 {
        return;
    }
    let plan = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    });
    plan.process(buf);
    let scale = 1.0 / (n as f64).sqrt();
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

/// In-place unitary forward transform, `X[k] = N^-1/2 sum x[n] e^{-j2pi kn/N}`.
pub fn fft_in_place(buf: &mut [Complex64]) {
    transform(buf, false);
}

/// In-place unitary inverse transform.
pub fn ifft_in_place(buf: &mut [Complex64]) {
    transform(buf, true);
}

pub fn fft(x: &[Complex64]) -> Vec<Complex64> {
    let mut v = x.to_vec();
    fft_in_place(&mut v);
    v
}

pub fn ifft(x: &[Complex64]) -> Vec<Complex64> {
    let mut v = x.to_vec();
    ifft_in_place(&mut v);
    v
}

pub fn energy(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum()
}

/// Multiply `x[n]` by `exp(j*2pi*freq*(n + start)/sample_rate)`.
pub fn rotate(x: &mut [Complex64], freq: f64, sample_rate: f64, start: usize) {
    let step = 2.0 * std::f64::consts::PI * freq / sample_rate;
    for (n, v) in x.iter_mut().enumerate() {
        // Evaluate the phase directly rather than by recursion so long
        // captures do not accumulate drift.
        *v *= Complex64::from_polar(1.0, step * (n + start) as f64);
    }
}

pub fn db10(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn from_db10(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
