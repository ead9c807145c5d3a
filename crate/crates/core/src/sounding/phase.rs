use super::sweep::FrequencySweep;
use crate::{Error, Result};

/// Remove common phase drift using the pilot path.
///
/// Each point is multiplied by `conj(pilot)/|pilot|`. The returned pilot is
/// the pilot magnitude, so a drift-free sweep is returned unchanged.
pub fn compensate_phase(sweep: &FrequencySweep) -> Result<FrequencySweep> {
    sweep.validate()?;
    let pilot = sweep
        .pilot
        .as_ref()
        .ok_or_else(|| Error::input("phase compensation needs a pilot response"))?;
    let mut out = sweep.clone();
    let mut comp = Vec::with_capacity(pilot.len());
    for (i, (h, p)) in out.h.iter_mut().zip(pilot).enumerate() {
        let mag = p.norm();
        if !(mag > 0.0) || !mag.is_finite() {
            return Err(Error::input(format!("pilot is zero or invalid at point {i}")));
        }
        *h *= p.conj() / mag;
        comp.push(num_complex::Complex64::new(mag, 0.0));
    }
    out.pilot = Some(comp);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn sweep(n: usize) -> FrequencySweep {
        let freqs = FrequencySweep::uniform_freqs(28e9, 1e6, n);
        let h = (0..n).map(|i| Complex64::from_polar(1.0 + 0.01 * i as f64, 0.3 * i as f64)).collect();
        FrequencySweep::new(freqs, h).unwrap()
    }

    #[test]
    fn unit_pilot_is_identity() {
        let mut s = sweep(16);
        s.pilot = Some(vec![Complex64::new(1.0, 0.0); 16]);
        assert_eq!(compensate_phase(&s).unwrap(), s);
    }

    #[test]
    fn common_drift_cancels() {
        let clean = sweep(32);
        let mut drifted = clean.clone();
        let phases: Vec<f64> = (0..32).map(|i| (i as f64 * 0.77).sin() * 3.0).collect();
        drifted.pilot = Some(phases.iter().map(|p| Complex64::from_polar(2.0, *p)).collect());
        for (h, p) in drifted.h.iter_mut().zip(&phases) {
            *h *= Complex64::from_polar(1.0, *p);
        }
        let out = compensate_phase(&drifted).unwrap();
        for (a, b) in out.h.iter().zip(&clean.h) {
            assert!((a - b).norm() <= 1e-12 * b.norm());
        }
    }

    #[test]
    fn missing_or_zero_pilot() {
        let mut s = sweep(4);
        assert!(compensate_phase(&s).is_err());
        s.pilot = Some(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!(compensate_phase(&s).is_err());
    }
}
