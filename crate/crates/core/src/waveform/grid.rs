use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cell::CellId;
use super::sequences::{gen_gold, gen_pbch_dmrs, gen_pss, gen_sss, qpsk};
use super::{SSB_SUBCARRIERS, SSB_SYMBOLS};
use crate::{Error, Result};

/// What a resource element carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ReKind {
    Empty,
    Pss,
    Sss,
    Pbch,
    Dmrs,
    /// Content not known, e.g. a grid recovered from a capture.
    Unlabeled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridShape {
    pub n_symbols: usize,
    pub n_subcarriers: usize,
}

impl GridShape {
    pub const SSB: GridShape = GridShape {
        n_symbols: SSB_SYMBOLS,
        n_subcarriers: SSB_SUBCARRIERS,
    };

    pub fn len(&self) -> usize {
        self.n_symbols * self.n_subcarriers
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Symbol-major matrix of resource elements with a per-element label.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceGrid {
    shape: GridShape,
    data: Vec<Complex64>,
    layout: Vec<ReKind>,
}

impl ResourceGrid {
    pub fn zeros(shape: GridShape) -> Self {
        Self {
            shape,
            data: vec![Complex64::new(0.0, 0.0); shape.len()],
            layout: vec![ReKind::Empty; shape.len()],
        }
    }

    /// Wraps raw symbol-major values; every element is labeled `Unlabeled`.
    pub fn from_data(shape: GridShape, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != shape.len() {
            return Err(Error::input(format!(
                "grid data has {} values, shape needs {}",
                data.len(),
                shape.len()
            )));
        }
        Ok(Self {
            shape,
            layout: vec![ReKind::Unlabeled; data.len()],
            data,
        })
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn n_symbols(&self) -> usize {
        self.shape.n_symbols
    }

    pub fn n_subcarriers(&self) -> usize {
        self.shape.n_subcarriers
    }

    fn index(&self, symbol: usize, subcarrier: usize) -> usize {
        assert!(
            symbol < self.shape.n_symbols && subcarrier < self.shape.n_subcarriers,
            "RE ({symbol}, {subcarrier}) outside {}x{} grid",
            self.shape.n_symbols,
            self.shape.n_subcarriers
        );
        symbol * self.shape.n_subcarriers + subcarrier
    }

    pub fn get(&self, symbol: usize, subcarrier: usize) -> Complex64 {
        self.data[self.index(symbol, subcarrier)]
    }

    pub fn kind(&self, symbol: usize, subcarrier: usize) -> ReKind {
        self.layout[self.index(symbol, subcarrier)]
    }

    pub fn set(&mut self, symbol: usize, subcarrier: usize, value: Complex64, kind: ReKind) {
        let i = self.index(symbol, subcarrier);
        self.data[i] = value;
        self.layout[i] = kind;
    }

    pub fn row(&self, symbol: usize) -> &[Complex64] {
        let n = self.shape.n_subcarriers;
        &self.data[symbol * n..(symbol + 1) * n]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn layout(&self) -> &[ReKind] {
        &self.layout
    }

    pub fn total_power(&self) -> f64 {
        crate::dsp::energy(&self.data)
    }

    pub fn count(&self, kind: ReKind) -> usize {
        self.layout.iter().filter(|k| **k == kind).count()
    }

    /// Values at the listed (symbol, subcarrier) positions.
    pub fn gather(&self, positions: &[(usize, usize)]) -> Vec<Complex64> {
        positions.iter().map(|&(l, k)| self.get(l, k)).collect()
    }
}

/// Configuration of an SSB burst set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SsbConfig {
    pub cell_id: CellId,
    /// DM-RS scrambling index of the first burst.
    pub i_ssb_bar: u8,
    /// Maximum SSB beams per burst set, 4 or 8.
    pub l_max: u8,
    pub burst_count: usize,
    /// Spacing between consecutive SSBs, in samples.
    pub burst_period: usize,
    /// Linear power of each occupied resource element.
    pub re_power: f64,
}

impl SsbConfig {
    pub fn new(cell_id: CellId) -> Self {
        Self {
            cell_id,
            i_ssb_bar: 0,
            l_max: 8,
            burst_count: 1,
            burst_period: 2 * 4 * (256 + 18),
            re_power: 1.0,
        }
    }

    /// Checks the invariants; `ssb_len` is the duration of one SSB in samples.
    pub fn validate(&self, ssb_len: usize) -> Result<()> {
        if self.l_max != 4 && self.l_max != 8 {
            return Err(Error::config(format!("l_max must be 4 or 8, got {}", self.l_max)));
        }
        if self.i_ssb_bar >= self.l_max {
            return Err(Error::config(format!(
                "i_ssb_bar {} must be below l_max {}",
                self.i_ssb_bar, self.l_max
            )));
        }
        if self.burst_count > 1 && self.burst_period < ssb_len {
            return Err(Error::config(format!(
                "burst period {} shorter than one SSB ({ssb_len} samples)",
                self.burst_period
            )));
        }
        if !(self.re_power.is_finite() && self.re_power >= 0.0) {
            return Err(Error::config(format!("re_power must be >= 0, got {}", self.re_power)));
        }
        Ok(())
    }

    /// DM-RS index carried by burst `b`.
    pub fn burst_index(&self, b: usize) -> u8 {
        ((self.i_ssb_bar as usize + b) % self.l_max as usize) as u8
    }
}

/// RE positions of each SSB signal class, in mapping order.
#[derive(Debug, Clone, PartialEq)]
pub struct SsbLayout {
    pub pss: Vec<(usize, usize)>,
    pub sss: Vec<(usize, usize)>,
    pub dmrs: Vec<(usize, usize)>,
    pub pbch: Vec<(usize, usize)>,
}

impl SsbLayout {
    pub fn for_cell(cell_id: CellId) -> Self {
        let nu = cell_id.dmrs_offset();
        let pss = (56..=182).map(|k| (0, k)).collect();
        let sss = (56..=182).map(|k| (2, k)).collect();
        let mut dmrs = Vec::with_capacity(144);
        let mut pbch = Vec::with_capacity(432);
        for l in 1..=3 {
            for k in 0..SSB_SUBCARRIERS {
                let in_pbch = l != 2 || !(48..192).contains(&k);
                if !in_pbch {
                    continue;
                }
                if k % 4 == nu {
                    dmrs.push((l, k));
                } else {
                    pbch.push((l, k));
                }
            }
        }
        Self { pss, sss, dmrs, pbch }
    }
}

/// Builds a standalone 4x240 SSB grid.
///
/// PBCH data elements carry placeholder QPSK from the Gold generator seeded
/// with the cell identity. Every occupied element has power `cfg.re_power`.
pub fn map_ssb(cfg: &SsbConfig) -> Result<ResourceGrid> {
    let cell = cfg.cell_id;
    let amp = cfg.re_power.sqrt();
    let layout = SsbLayout::for_cell(cell);
    let mut grid = ResourceGrid::zeros(GridShape::SSB);

    let pss = gen_pss(cell.n2())?;
    for (&(l, k), v) in layout.pss.iter().zip(pss) {
        grid.set(l, k, Complex64::new(amp * v, 0.0), ReKind::Pss);
    }
    let sss = gen_sss(cell.n1(), cell.n2())?;
    for (&(l, k), v) in layout.sss.iter().zip(sss) {
        grid.set(l, k, Complex64::new(amp * v, 0.0), ReKind::Sss);
    }
    let dmrs = gen_pbch_dmrs(cell, cfg.i_ssb_bar)?;
    for (&(l, k), v) in layout.dmrs.iter().zip(dmrs) {
        grid.set(l, k, amp * v, ReKind::Dmrs);
    }
    for (&(l, k), v) in layout.pbch.iter().zip(pbch_placeholder(cell)?) {
        grid.set(l, k, amp * v, ReKind::Pbch);
    }
    Ok(grid)
}

/// Deterministic unit-power stand-in for the coded PBCH payload.
pub(crate) fn pbch_placeholder(cell: CellId) -> Result<Vec<Complex64>> {
    Ok(qpsk(&gen_gold(cell.cell() as u32, 0, 2 * 432)?))
}
