use serde::{Deserialize, Serialize};

use crate::waveform::ResourceGrid;
use crate::{Error, Result};

/// Default margin over the noise floor for an element to count as occupied.
pub const OCCUPANCY_MARGIN: f64 = 10.0;
const RB_WIDTH: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Occupancy {
    pub occupied_fraction: f64,
    /// Resource blocks with at least one occupied element.
    pub occupied_rb_count: usize,
    pub rb_total: usize,
}

pub fn estimate_occupancy(grids: &[ResourceGrid], noise_floor: f64) -> Result<Occupancy> {
    estimate_occupancy_with_margin(grids, noise_floor, OCCUPANCY_MARGIN)
}

/// An element is occupied when its power averaged over `grids` exceeds
/// `noise_floor * margin`.
pub fn estimate_occupancy_with_margin(
    grids: &[ResourceGrid],
    noise_floor: f64,
    margin: f64,
) -> Result<Occupancy> {
    let first = grids.first().ok_or_else(|| Error::input("no grids"))?;
    let shape = first.shape();
    if let Some(g) = grids.iter().find(|g| g.shape() != shape) {
        return Err(Error::input(format!(
            "grid shapes differ: {}x{} vs {}x{}",
            shape.n_symbols,
            shape.n_subcarriers,
            g.n_symbols(),
            g.n_subcarriers()
        )));
    }
    if shape.is_empty() {
        return Err(Error::input("grids have no elements"));
    }
    let mut mean = vec![0.0; shape.len()];
    for g in grids {
        for (m, v) in mean.iter_mut().zip(g.data()) {
            *m += v.norm_sqr();
        }
    }
    let limit = noise_floor * margin;
    let occupied: Vec<bool> = mean
        .iter()
        .map(|m| m / grids.len() as f64 > limit)
        .collect();
    let count = occupied.iter().filter(|o| **o).count();

    let n_sc = shape.n_subcarriers;
    let rb_total = n_sc.div_ceil(RB_WIDTH);
    let occupied_rb_count = (0..rb_total)
        .filter(|rb| {
            let ks = rb * RB_WIDTH..((rb + 1) * RB_WIDTH).min(n_sc);
            (0..shape.n_symbols).any(|l| ks.clone().any(|k| occupied[l * n_sc + k]))
        })
        .count();
    Ok(Occupancy {
        occupied_fraction: count as f64 / shape.len() as f64,
        occupied_rb_count,
        rb_total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveform::{GridShape, ReKind};
    use num_complex::Complex64;

    #[test]
    fn empty_and_full() {
        let shape = GridShape::SSB;
        let zero = ResourceGrid::zeros(shape);
        let o = estimate_occupancy(&[zero.clone(), zero], 1e-3).unwrap();
        assert_eq!(o.occupied_fraction, 0.0);
        assert_eq!(o.occupied_rb_count, 0);

        let full = ResourceGrid::from_data(shape, vec![Complex64::new(1.0, 0.0); shape.len()]).unwrap();
        let o = estimate_occupancy(&[full], 1e-3).unwrap();
        assert_eq!(o.occupied_fraction, 1.0);
        assert_eq!(o.occupied_rb_count, 20);
    }

    #[test]
    fn half_loaded_at_twenty_db() {
        let shape = GridShape::SSB;
        let floor = 1e-2;
        let mut g = ResourceGrid::zeros(shape);
        for l in 0..4 {
            for k in (0..240).step_by(2) {
                g.set(l, k, Complex64::new((100.0 * floor as f64).sqrt(), 0.0), ReKind::Unlabeled);
            }
        }
        let o = estimate_occupancy(&[g], floor).unwrap();
        assert!((o.occupied_fraction - 0.5).abs() <= 0.01);
    }

    #[test]
    fn errors() {
        assert!(estimate_occupancy(&[], 1.0).is_err());
        let a = ResourceGrid::zeros(GridShape::SSB);
        let b = ResourceGrid::zeros(GridShape { n_symbols: 1, n_subcarriers: 12 });
        assert!(estimate_occupancy(&[a, b], 1.0).is_err());
    }
}
