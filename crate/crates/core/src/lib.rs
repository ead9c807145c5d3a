//! Desk-scale tooling for radio metrology of emerging wireless standards.
//!
//! The crate is split along the measurement chain:
//!
//! - [`waveform`]: NR synchronization-signal block generation (PSS, SSS,
//!   PBCH DM-RS), resource-grid mapping and CP-OFDM.
//! - [`detector`]: blind SSB search in an IQ capture, cell identity and SSB
//!   index recovery, resource occupancy.
//! - [`exposure`]: code-selective per-RE power, exposure extrapolation and
//!   uncertainty budgets.
//! - [`sounding`]: VNA frequency-sweep post-processing, phase-drift
//!   compensation, virtual-array angle/delay profiles.
//! - [`ota`]: wireless-cable transfer-matrix estimation and calibration,
//!   reverberation-chamber channels and their cancellation, channel
//!   application to captures.

pub mod detector;
pub mod dsp;
mod error;
pub mod exposure;
mod iq;
pub mod ota;
pub mod sounding;
pub mod waveform;

pub use error::{Error, Result};
pub use iq::IqCapture;
pub use detector::{DetectionResult, PssCandidate};
pub use num_complex::Complex64;
pub use waveform::{CellId, OfdmParams, ResourceGrid, SsbConfig};
