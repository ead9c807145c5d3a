use num_complex::Complex64;

/// Flat-magnitude, linear-phase channel model across subcarriers:
/// `H(k) = gain * exp(j * slope * k)`, with `k` measured from the grid centre.
///
/// A linear phase slope absorbs residual timing error inside the cyclic
/// prefix; the gain is the least-squares average once the slope is removed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelFit {
    pub gain: Complex64,
    pub slope: f64,
}

/// Largest phase slope searched, in radians per subcarrier. Covers a timing
/// error of a full 18-sample prefix at a 256-point transform.
pub const MAX_SLOPE: f64 = 0.45;

const COARSE_STEP: f64 = 0.01;
const FINE_STEP: f64 = 2e-4;

impl ChannelFit {
    /// Fits the model to observations `(k, received, reference)`.
    pub fn fit(obs: &[(f64, Complex64, Complex64)]) -> Self {
        let ls: Vec<(f64, Complex64)> = obs
            .iter()
            .filter(|(_, _, r)| r.norm_sqr() > 0.0)
            .map(|&(k, y, r)| (k, y * r.conj() / r.norm_sqr()))
            .collect();
        if ls.is_empty() {
            return Self {
                gain: Complex64::new(0.0, 0.0),
                slope: 0.0,
            };
        }
        let score = |slope: f64| -> Complex64 {
            ls.iter()
                .map(|&(k, h)| h * Complex64::from_polar(1.0, -slope * k))
                .sum()
        };
        let search = |centre: f64, half: i64, step: f64| -> f64 {
            let mut best = (f64::NEG_INFINITY, centre);
            for i in -half..=half {
                let s = centre + i as f64 * step;
                let m = score(s).norm_sqr();
                if m > best.0 {
                    best = (m, s);
                }
            }
            best.1
        };
        let coarse = search(0.0, (MAX_SLOPE / COARSE_STEP).round() as i64, COARSE_STEP);
        let slope = search(coarse, (COARSE_STEP / FINE_STEP).round() as i64, FINE_STEP);
        Self {
            gain: score(slope) / ls.len() as f64,
            slope,
        }
    }

    pub fn at(&self, k: f64) -> Complex64 {
        self.gain * Complex64::from_polar(1.0, self.slope * k)
    }

    /// Phase-only equalization: rotates `y` by the conjugate channel phase.
    pub fn derotate(&self, k: f64, y: Complex64) -> Complex64 {
        let h = self.at(k);
        let m = h.norm();
        if m == 0.0 {
            y
        } else {
            y * h.conj() / m
        }
    }
}
