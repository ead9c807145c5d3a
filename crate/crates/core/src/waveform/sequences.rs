//! Length-127 synchronization sequences and the length-31 Gold generator.

use num_complex::Complex64;

use super::cell::{CellId, N1_MAX, N2_MAX};
use crate::{Error, Result};

pub const SYNC_LEN: usize = 127;
pub const DMRS_LEN: usize = 144;
const GOLD_NC: usize = 1600;

/// One period of a length-127 m-sequence.
///
/// `state` holds `x(0..7)` with bit `i` = `x(i)`; the recurrence is
/// `x(i+7) = x(i+tap) + x(i) mod 2`.
fn m_sequence(state: u8, tap: u32) -> [u8; SYNC_LEN] {
    let mut s = state as u32;
    let mut out = [0u8; SYNC_LEN];
    for bit in out.iter_mut() {
        *bit = (s & 1) as u8;
        let fb = ((s >> tap) ^ s) & 1;
        s = (s >> 1) | (fb << 6);
    }
    out
}

/// PSS for sector index `n2`, as BPSK values in {-1, +1}.
pub fn gen_pss(n2: u8) -> Result<Vec<f64>> {
    if n2 > N2_MAX {
        return Err(Error::domain(format!("PSS index n2 must be 0..=2, got {n2}")));
    }
    // x(6..0) = 1110110
    let x = m_sequence(0b111_0110, 4);
    Ok((0..SYNC_LEN)
        .map(|n| 1.0 - 2.0 * x[(n + 43 * n2 as usize) % SYNC_LEN] as f64)
        .collect())
}

/// SSS for group `n1` and sector `n2`, as BPSK values in {-1, +1}.
pub fn gen_sss(n1: u16, n2: u8) -> Result<Vec<f64>> {
    if n1 > N1_MAX {
        return Err(Error::domain(format!("SSS group n1 must be 0..=335, got {n1}")));
    }
    if n2 > N2_MAX {
        return Err(Error::domain(format!("SSS sector n2 must be 0..=2, got {n2}")));
    }
    let x0 = m_sequence(1, 4);
    let x1 = m_sequence(1, 1);
    let m0 = 15 * (n1 as usize / 112) + 5 * n2 as usize;
    let m1 = n1 as usize % 112;
    Ok((0..SYNC_LEN)
        .map(|n| {
            let a = 1.0 - 2.0 * x0[(n + m0) % SYNC_LEN] as f64;
            let b = 1.0 - 2.0 * x1[(n + m1) % SYNC_LEN] as f64;
            a * b
        })
        .collect())
}

/// `length` bits of the length-31 Gold sequence `c(n)`, starting at `c(offset)`.
pub fn gen_gold(c_init: u32, offset: usize, length: usize) -> Result<Vec<u8>> {
    if c_init >= 1 << 31 {
        return Err(Error::domain(format!("c_init must be below 2^31, got {c_init}")));
    }
    let mut x1: u32 = 1;
    let mut x2: u32 = c_init;
    let step = |x1: &mut u32, x2: &mut u32| {
        let f1 = ((*x1 >> 3) ^ *x1) & 1;
        let f2 = ((*x2 >> 3) ^ (*x2 >> 2) ^ (*x2 >> 1) ^ *x2) & 1;
        *x1 = (*x1 >> 1) | (f1 << 30);
        *x2 = (*x2 >> 1) | (f2 << 30);
    };
    for _ in 0..GOLD_NC + offset {
        step(&mut x1, &mut x2);
    }
    let mut out = Vec::with_capacity(length);
    for _ in 0..length {
        out.push(((x1 ^ x2) & 1) as u8);
        step(&mut x1, &mut x2);
    }
    Ok(out)
}

/// Scrambling seed for the PBCH DM-RS.
pub fn dmrs_c_init(cell_id: CellId, i_ssb_bar: u8) -> u32 {
    let i = i_ssb_bar as u32 + 1;
    let cell = cell_id.cell() as u32;
    (1 << 11) * i * (cell / 4 + 1) + (1 << 6) * i + cell % 4
}

/// Maps bit pairs to unit-magnitude QPSK symbols.
pub fn qpsk(bits: &[u8]) -> Vec<Complex64> {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    bits.chunks_exact(2)
        .map(|p| Complex64::new(a * (1.0 - 2.0 * p[0] as f64), a * (1.0 - 2.0 * p[1] as f64)))
        .collect()
}

/// PBCH DM-RS for a cell and SSB index `i_ssb_bar`.
pub fn gen_pbch_dmrs(cell_id: CellId, i_ssb_bar: u8) -> Result<Vec<Complex64>> {
    if i_ssb_bar > 7 {
        return Err(Error::domain(format!("i_ssb_bar must be 0..=7, got {i_ssb_bar}")));
    }
    let c = gen_gold(dmrs_c_init(cell_id, i_ssb_bar), 0, 2 * DMRS_LEN)?;
    Ok(qpsk(&c))
}
