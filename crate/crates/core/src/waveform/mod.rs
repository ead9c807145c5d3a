//! NR synchronization-signal block generation and CP-OFDM.

mod cell;
mod grid;
pub(crate) mod ofdm;
pub mod sequences;
mod synth;

pub use cell::CellId;
pub use grid::{map_ssb, GridShape, ReKind, ResourceGrid, SsbConfig, SsbLayout};
pub use ofdm::{ofdm_demodulate, ofdm_modulate, OfdmParams, PARSEVAL_SCALE};
pub use sequences::{gen_gold, gen_pbch_dmrs, gen_pss, gen_sss};
pub use synth::{burst_timings, synthesize_ssb_bursts};

/// Subcarriers spanned by one SSB.
pub const SSB_SUBCARRIERS: usize = 240;
/// OFDM symbols spanned by one SSB.
pub const SSB_SYMBOLS: usize = 4;
