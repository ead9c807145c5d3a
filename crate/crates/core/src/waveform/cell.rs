use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const N1_MAX: u16 = 335;
pub const N2_MAX: u8 = 2;
pub const CELL_MAX: u16 = 1007;

/// Physical cell identity, `cell = 3*n1 + n2`.
///
/// `n1` is the group index carried by the SSS, `n2` the index carried by
/// the PSS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "CellIdRepr", into = "CellIdRepr")]
pub struct CellId {
    n1: u16,
    n2: u8,
}

#[derive(Serialize, Deserialize)]
struct CellIdRepr {
    n1: u16,
    n2: u8,
    cell: u16,
}

impl CellId {
    pub fn new(n1: u16, n2: u8) -> Result<Self> {
        if n1 > N1_MAX {
            return Err(Error::domain(format!("n1 must be in 0..={N1_MAX}, got {n1}")));
        }
        if n2 > N2_MAX {
            return Err(Error::domain(format!("n2 must be in 0..={N2_MAX}, got {n2}")));
        }
        Ok(Self { n1, n2 })
    }

    pub fn from_cell(cell: u16) -> Result<Self> {
        if cell > CELL_MAX {
            return Err(Error::domain(format!("cell id must be in 0..={CELL_MAX}, got {cell}")));
        }
        Ok(Self {
            n1: cell / 3,
            n2: (cell % 3) as u8,
        })
    }

    pub fn n1(self) -> u16 {
        self.n1
    }

    pub fn n2(self) -> u8 {
        self.n2
    }

    pub fn cell(self) -> u16 {
        3 * self.n1 + self.n2 as u16
    }

    /// DM-RS subcarrier offset within each group of four.
    pub fn dmrs_offset(self) -> usize {
        (self.cell() % 4) as usize
    }

    pub fn all() -> impl Iterator<Item = CellId> {
        (0..=CELL_MAX).map(|c| CellId::from_cell(c).expect("in range"))
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (n1={}, n2={})", self.cell(), self.n1, self.n2)
    }
}

impl From<CellId> for CellIdRepr {
    fn from(c: CellId) -> Self {
        CellIdRepr {
            n1: c.n1,
            n2: c.n2,
            cell: c.cell(),
        }
    }
}

impl TryFrom<CellIdRepr> for CellId {
    type Error = Error;

    fn try_from(r: CellIdRepr) -> Result<Self> {
        let id = CellId::new(r.n1, r.n2)?;
        if id.cell() != r.cell {
            return Err(Error::domain(format!(
                "cell {} inconsistent with n1={} n2={}",
                r.cell, r.n1, r.n2
            )));
        }
        Ok(id)
    }
}
