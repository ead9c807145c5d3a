//! OTA test-environment simulation: wireless-cable calibration from
//! magnitude-only reports, reverberation-chamber channels, and channel
//! application to IQ captures.

mod cable;
mod channel;
mod rc;

pub use cable::{
    compute_calibration, compute_calibration_with_cap, estimate_transfer_matrix, isolation_db,
    phase_aligned_error, random_well_conditioned, sound_rsrp, RsrpSounder, SimulatedSounder,
    TransferMatrix, CONDITION_CAP, ISOLATION_CAP_DB,
};
pub use channel::{add_awgn, apply_cfo, apply_channel, complex_gaussian, noise_power_for_snr};
pub use rc::{
    cancel_rc_decay, rc_power_profile, simulate_rc_channel, Cancellation, FadingRealization,
    RcChannelModel, Tap, NOISE_GAIN_BOUND_DB,
};
