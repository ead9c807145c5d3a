use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::channel::complex_gaussian;
use crate::{dsp, Error, Result};

/// Condition number above which calibration is refused.
pub const CONDITION_CAP: f64 = 1e6;

/// Reported isolation when no off-diagonal power is measurable, dB.
pub const ISOLATION_CAP_DB: f64 = 100.0;

const SUPPORTED_DIMS: [usize; 3] = [2, 4, 8];

/// Square complex matrix from probe ports (columns) to DUT ports (rows).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "MatrixRepr", try_from = "MatrixRepr")]
pub struct TransferMatrix {
    a: DMatrix<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: Vec<Vec<Complex64>>,
    #[serde(default, skip_deserializing)]
    condition_number: f64,
}

impl From<TransferMatrix> for MatrixRepr {
    fn from(t: TransferMatrix) -> Self {
        Self {
            condition_number: t.condition_number(),
            rows: t.rows(),
        }
    }
}

impl TryFrom<MatrixRepr> for TransferMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        TransferMatrix::from_rows(&r.rows)
    }
}

impl TransferMatrix {
    pub fn new(a: DMatrix<Complex64>) -> Result<Self> {
        if !a.is_square() || !SUPPORTED_DIMS.contains(&a.nrows()) {
            return Err(Error::input(format!(
                "transfer matrix must be 2x2, 4x4 or 8x8, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if a.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::input("transfer matrix has non-finite entries"));
        }
        Ok(Self { a })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let m = rows.len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::input("transfer matrix rows must all have length equal to the row count"));
        }
        Self::new(DMatrix::from_fn(m, m, |i, j| rows[i][j]))
    }

    pub fn identity(m: usize) -> Result<Self> {
        Self::new(DMatrix::identity(m, m))
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.a
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.a[(row, col)]
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.a[(i, j)]).collect())
            .collect()
    }

    /// Ratio of extreme singular values; infinite when singular.
    pub fn condition_number(&self) -> f64 {
        let sv = self.a.clone().singular_values();
        let max = sv.max();
        let min = sv.min();
        if min <= 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }

    /// Matrix product `self * rhs`.
    pub fn product(&self, rhs: &TransferMatrix) -> Result<TransferMatrix> {
        TransferMatrix::new(&self.a * &rhs.a)
    }

    /// `a * w`, the field at each DUT port.
    pub fn apply(&self, w: &[Complex64]) -> Result<Vec<Complex64>> {
        if w.len() != self.dim() {
            return Err(Error::input(format!(
                "weight vector has {} entries for a {}-port matrix",
                w.len(),
                self.dim()
            )));
        }
        Ok((0..self.dim())
            .map(|j| (0..self.dim()).map(|i| self.a[(j, i)] * w[i]).sum())
            .collect())
    }
}

/// Magnitude-only received power at each DUT port for probe weights `w`.
///
/// Complex Gaussian noise of power `10^(noise_db/10)` is added to each
/// port before detection; `noise_db = -inf` is noiseless.
pub fn sound_rsrp<R: Rng + ?Sized>(
    a: &TransferMatrix,
    w: &[Complex64],
    noise_db: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let y = a.apply(w)?;
    let noise = dsp::from_db10(noise_db);
    Ok(y.into_iter()
        .map(|v| {
            let n = if noise > 0.0 {
                complex_gaussian(rng, noise)
            } else {
                Complex64::new(0.0, 0.0)
            };
            (v + n).norm_sqr()
        })
        .collect())
}

/// Source of RSRP reports for a chosen probe excitation.
pub trait RsrpSounder {
    fn ports(&self) -> usize;
    fn sound(&mut self, weights: &[Complex64]) -> Result<Vec<f64>>;
}

/// Sounder backed by a known matrix, with seeded report noise.
pub struct SimulatedSounder {
    matrix: TransferMatrix,
    noise_db: f64,
    rng: ChaCha8Rng,
    soundings: usize,
}

impl SimulatedSounder {
    pub fn new(matrix: TransferMatrix, noise_db: f64, seed: u64) -> Self {
        Self {
            matrix,
            noise_db,
            rng: ChaCha8Rng::seed_from_u64(seed),
            soundings: 0,
        }
    }

    pub fn soundings(&self) -> usize {
        self.soundings
    }
}

impl RsrpSounder for SimulatedSounder {
    fn ports(&self) -> usize {
        self.matrix.dim()
    }

    fn sound(&mut self, weights: &[Complex64]) -> Result<Vec<f64>> {
        self.soundings += 1;
        sound_rsrp(&self.matrix, weights, self.noise_db, &mut self.rng)
    }
}

const PROBE_PHASES: [f64; 3] = [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0];

/// Recover the transfer matrix from RSRP reports, up to one phase per row.
///
/// Magnitudes come from single-probe soundings. A row whose entry for
/// probe 0 vanishes is only usable when it has a single nonzero entry. The phase of entry `(j, i)`
/// relative to `(j, 0)` comes from exciting probes 0 and `i` together at
/// relative phases 0, 120 and 240 degrees: the first Fourier coefficient of
/// the three reports has argument `arg a_ji - arg a_j0`.
pub fn estimate_transfer_matrix<S: RsrpSounder + ?Sized>(sounder: &mut S) -> Result<TransferMatrix> {
    let m = sounder.ports();
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut power = vec![vec![0.0; m]; m];
    for i in 0..m {
        let mut w = vec![zero; m];
        w[i] = one;
        let r = sounder.sound(&w)?;
        if r.len() != m {
            return Err(Error::input(format!("sounder returned {} reports for {m} ports", r.len())));
        }
        for j in 0..m {
            power[j][i] = r[j].max(0.0);
        }
    }
    let peak = power.iter().flatten().cloned().fold(0.0, f64::max);
    let negligible = peak * 1e-12;
    for (j, row) in power.iter().enumerate() {
        if row[0] <= negligible && row[1..].iter().filter(|p| **p > negligible).count() > 1 {
            return Err(Error::DegenerateReference { port: j });
        }
    }
    let mut est = DMatrix::from_fn(m, m, |j, i| Complex64::new(power[j][i].sqrt(), 0.0));
    for i in 1..m {
        let mut acc = vec![zero; m];
        for &phi in &PROBE_PHASES {
            let mut w = vec![zero; m];
            w[0] = one;
            w[i] = Complex64::from_polar(1.0, phi);
            let r = sounder.sound(&w)?;
            for j in 0..m {
                acc[j] += r[j] * Complex64::from_polar(1.0, -phi);
            }
        }
        for j in 0..m {
            est[(j, i)] = Complex64::from_polar(power[j][i].sqrt(), acc[j].arg());
        }
    }
    TransferMatrix::new(est)
}

/// Calibration `C = a^-1`, refused above [`CONDITION_CAP`].
pub fn compute_calibration(a: &TransferMatrix) -> Result<TransferMatrix> {
    compute_calibration_with_cap(a, CONDITION_CAP)
}

pub fn compute_calibration_with_cap(a: &TransferMatrix, cap: f64) -> Result<TransferMatrix> {
    let condition = a.condition_number();
    if !condition.is_finite() || condition > cap {
        return Err(Error::IllConditioned { condition });
    }
    let inv = a
        .a
        .clone()
        .try_inverse()
        .ok_or(Error::IllConditioned { condition })?;
    TransferMatrix::new(inv)
}

/// Worst-row ratio of diagonal power to off-diagonal power, dB.
///
/// Capped at [`ISOLATION_CAP_DB`]; a zero diagonal entry gives `-inf`.
pub fn isolation_db(t: &TransferMatrix) -> f64 {
    let m = t.dim();
    (0..m)
        .map(|i| {
            let diag = t.a[(i, i)].norm_sqr();
            let off: f64 = (0..m).filter(|&j| j != i).map(|j| t.a[(i, j)].norm_sqr()).sum();
            if diag == 0.0 {
                f64::NEG_INFINITY
            } else if off <= diag * dsp::from_db10(-ISOLATION_CAP_DB) {
                ISOLATION_CAP_DB
            } else {
                dsp::db10(diag / off).min(ISOLATION_CAP_DB)
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// Relative Frobenius error after rotating each row of `estimate` by the
/// phase that best aligns it with `truth`.
pub fn phase_aligned_error(estimate: &TransferMatrix, truth: &TransferMatrix) -> f64 {
    let m = truth.dim();
    let mut err = 0.0;
    let mut norm = 0.0;
    for j in 0..m {
        let c: Complex64 = (0..m).map(|i| truth.a[(j, i)] * estimate.a[(j, i)].conj()).sum();
        let rot = if c.norm() > 0.0 { c / c.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..m {
            err += (estimate.a[(j, i)] * rot - truth.a[(j, i)]).norm_sqr();
            norm += truth.a[(j, i)].norm_sqr();
        }
    }
    (err / norm).sqrt()
}

/// Seeded i.i.d. CN(0,1) matrix redrawn until its condition number is
/// below `max_condition`.
pub fn random_well_conditioned<R: Rng + ?Sized>(
    m: usize,
    max_condition: f64,
    rng: &mut R,
) -> Result<TransferMatrix> {
    for _ in 0..100_000 {
        let a = TransferMatrix::new(DMatrix::from_fn(m, m, |_, _| complex_gaussian(rng, 1.0)))?;
        if a.condition_number() < max_condition {
            return Ok(a);
        }
    }
    Err(Error::domain(format!(
        "no {m}x{m} matrix with condition number below {max_condition} found"
    )))
}
