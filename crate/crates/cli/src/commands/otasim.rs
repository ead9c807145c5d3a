use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Subcommand;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use wavemetro_core::ota::{
    cancel_rc_decay, compute_calibration, estimate_transfer_matrix, isolation_db, random_well_conditioned,
    rc_power_profile, simulate_rc_channel, RcChannelModel, SimulatedSounder, TransferMatrix,
};
use wavemetro_core::sounding::Cir;

use super::Outcome;
use crate::config::{load, pick, require_writable};
use crate::report::emit;
use crate::GlobalArgs;

#[derive(Debug, clap::Args)]
pub struct Args {
    #[command(subcommand)]
    pub mode: Mode,
}

#[derive(Debug, Subcommand)]
pub enum Mode {
    /// Estimate a simulated fixture's transfer matrix and calibrate it.
    WirelessCable {
        /// DUT ports: 2, 4 or 8.
        #[arg(long)]
        ports: Option<usize>,
        /// Measurement noise relative to unit RSRP, dB; noiseless when absent.
        #[arg(long, allow_hyphen_values = true)]
        noise_db: Option<f64>,
        /// Largest condition number of the drawn fixture.
        #[arg(long)]
        max_condition: Option<f64>,
    },
    /// Draw reverberation-chamber fading realizations.
    Rc {
        /// Power decay constant, seconds.
        #[arg(long)]
        tau_rc: Option<f64>,
        #[arg(long)]
        taps: Option<usize>,
        /// Tap spacing, seconds.
        #[arg(long)]
        tap_spacing: Option<f64>,
        #[arg(long)]
        keyhole: bool,
        #[arg(long)]
        realizations: Option<usize>,
        /// Run the decay cancellation demo on the first realization.
        #[arg(long)]
        cancel: bool,
        /// Regularization of the cancellation.
        #[arg(long)]
        epsilon: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WirelessCableConfig {
    pub ports: usize,
    pub noise_db: Option<f64>,
    pub max_condition: f64,
}

impl Default for WirelessCableConfig {
    fn default() -> Self {
        Self {
            ports: 4,
            noise_db: None,
            max_condition: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RcConfig {
    pub tau_rc_s: f64,
    pub n_taps: usize,
    pub tap_spacing_s: f64,
    pub keyhole: bool,
    pub realizations: usize,
    pub cancel: bool,
    pub epsilon: f64,
    /// Length of the demo impulse responses, in tap spacings.
    pub bins: usize,
    /// Bin of the wanted response in the demo measurement.
    pub intended_bin: usize,
}

impl Default for RcConfig {
    fn default() -> Self {
        Self {
            tau_rc_s: 40e-9,
            n_taps: 16,
            tap_spacing_s: 5e-9,
            keyhole: false,
            realizations: 1,
            cancel: false,
            epsilon: 1e-3,
            bins: 256,
            intended_bin: 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OtasimConfig {
    pub seed: u64,
    pub wireless_cable: WirelessCableConfig,
    pub rc: RcConfig,
    pub out: Option<PathBuf>,
}

impl Default for OtasimConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            wireless_cable: WirelessCableConfig::default(),
            rc: RcConfig::default(),
            out: None,
        }
    }
}

#[derive(Debug, Serialize)]
struct CableReport {
    config: OtasimConfig,
    true_matrix: TransferMatrix,
    estimated_matrix: TransferMatrix,
    calibration: TransferMatrix,
    /// Largest entry error after aligning each row's phase, relative to the
    /// largest true entry.
    estimation_error: f64,
    soundings: usize,
    isolation_before_db: f64,
    isolation_db: f64,
}

#[derive(Debug, Serialize)]
struct TapRepr {
    delay_s: f64,
    gain: Complex64,
    power_db: f64,
}

#[derive(Debug, Serialize)]
struct RealizationRepr {
    seed: u64,
    total_power: f64,
    taps: Vec<TapRepr>,
}

#[derive(Debug, Serialize)]
struct CancellationRepr {
    intended_delay_s: f64,
    out_of_bin_before_db: f64,
    out_of_bin_after_db: f64,
    noise_gain_db: f64,
    noise_amplified: bool,
}

#[derive(Debug, Serialize)]
struct RcReport {
    config: OtasimConfig,
    expected_profile_db: Vec<f64>,
    realizations: Vec<RealizationRepr>,
    cancellation: Option<CancellationRepr>,
}

fn db10(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Worst entry error between `est` and `truth` once each row of `est` is
/// rotated onto the matching row of `truth`.
fn aligned_error(est: &TransferMatrix, truth: &TransferMatrix) -> f64 {
    let (e, t) = (est.rows(), truth.rows());
    let scale = t.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    let mut worst = 0f64;
    for (er, tr) in e.iter().zip(&t) {
        let dot: Complex64 = er.iter().zip(tr).map(|(a, b)| b * a.conj()).sum();
        let rot = if dot.norm() > 0.0 { dot / dot.norm() } else { Complex64::new(1.0, 0.0) };
        for (a, b) in er.iter().zip(tr) {
            worst = worst.max((a * rot - b).norm());
        }
    }
    if scale > 0.0 {
        worst / scale
    } else {
        worst
    }
}

/// Power outside bin `keep` relative to the strongest bin, dB.
fn out_of_bin_db(taps: &[Complex64], keep: usize) -> f64 {
    let peak = taps.iter().map(|t| t.norm_sqr()).fold(0.0, f64::max);
    let off: f64 = taps
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != keep)
        .map(|(_, t)| t.norm_sqr())
        .sum();
    db10(off / peak)
}

pub fn run(global: &GlobalArgs, args: &Args) -> Result<Outcome> {
    let c: OtasimConfig = load(global.config.as_deref())?;
    let mut cfg = OtasimConfig {
        seed: pick(global.seed, c.seed),
        out: global.out.clone().or(c.out),
        ..c
    };
    if let Some(out) = &cfg.out {
        require_writable(out)?;
    }
    match &args.mode {
        Mode::WirelessCable {
            ports,
            noise_db,
            max_condition,
        } => {
            let wc = &mut cfg.wireless_cable;
            wc.ports = pick(*ports, wc.ports);
            wc.noise_db = noise_db.or(wc.noise_db);
            wc.max_condition = pick(*max_condition, wc.max_condition);
            wireless_cable(global, cfg)
        }
        Mode::Rc {
            tau_rc,
            taps,
            tap_spacing,
            keyhole,
            realizations,
            cancel,
            epsilon,
        } => {
            let rc = &mut cfg.rc;
            rc.tau_rc_s = pick(*tau_rc, rc.tau_rc_s);
            rc.n_taps = pick(*taps, rc.n_taps);
            rc.tap_spacing_s = pick(*tap_spacing, rc.tap_spacing_s);
            rc.keyhole |= *keyhole;
            rc.realizations = pick(*realizations, rc.realizations);
            rc.cancel |= *cancel;
            rc.epsilon = pick(*epsilon, rc.epsilon);
            reverberation(global, cfg)
        }
    }
}

fn wireless_cable(global: &GlobalArgs, cfg: OtasimConfig) -> Result<Outcome> {
    let wc = &cfg.wireless_cable;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let truth = random_well_conditioned(wc.ports, wc.max_condition, &mut rng)?;
    let noise = wc.noise_db.unwrap_or(f64::NEG_INFINITY);
    let mut sounder = SimulatedSounder::new(truth.clone(), noise, cfg.seed.wrapping_add(1));
    let est = estimate_transfer_matrix(&mut sounder)?;
    let calibration = compute_calibration(&est)?;
    let effective = truth.product(&calibration)?;
    let report = CableReport {
        estimation_error: aligned_error(&est, &truth),
        soundings: sounder.soundings(),
        isolation_before_db: isolation_db(&truth),
        isolation_db: isolation_db(&effective),
        true_matrix: truth,
        estimated_matrix: est,
        calibration,
        config: cfg,
    };
    note!(global, "isolation {:.2} dB after calibration", report.isolation_db);
    emit(&report, report.config.out.as_deref())?;
    Ok(Outcome::Success)
}

fn reverberation(global: &GlobalArgs, cfg: OtasimConfig) -> Result<Outcome> {
    let rc = &cfg.rc;
    if rc.realizations == 0 && rc.cancel {
        bail!("the cancellation demo needs at least one realization");
    }
    let model = RcChannelModel {
        tau_rc: rc.tau_rc_s,
        n_taps: rc.n_taps,
        tap_spacing: rc.tap_spacing_s,
        keyhole: rc.keyhole,
        seed: cfg.seed,
    };
    let mut draws = Vec::with_capacity(rc.realizations);
    for i in 0..rc.realizations as u64 {
        let seed = cfg.seed.wrapping_add(i);
        draws.push((seed, simulate_rc_channel(&RcChannelModel { seed, ..model })?));
    }
    let cancellation = if rc.cancel {
        if rc.n_taps > rc.bins || rc.intended_bin >= rc.bins {
            bail!(
                "demo needs n_taps ({}) and intended_bin ({}) within bins ({})",
                rc.n_taps,
                rc.intended_bin,
                rc.bins
            );
        }
        let reference = draws[0].1.to_cir(rc.tap_spacing_s, rc.bins)?;
        let n = rc.bins;
        let mut shifted = vec![Complex64::new(0.0, 0.0); n];
        for (k, t) in reference.taps.iter().enumerate() {
            shifted[(k + rc.intended_bin) % n] = *t;
        }
        let measured = Cir::from_taps(shifted, rc.tap_spacing_s);
        let out = cancel_rc_decay(&measured, &reference, rc.epsilon)?;
        Some(CancellationRepr {
            intended_delay_s: rc.intended_bin as f64 * rc.tap_spacing_s,
            out_of_bin_before_db: out_of_bin_db(&measured.taps, rc.intended_bin),
            out_of_bin_after_db: out_of_bin_db(&out.cir.taps, rc.intended_bin),
            noise_gain_db: out.noise_gain_db,
            noise_amplified: out.noise_amplified,
        })
    } else {
        None
    };
    if let Some(c) = &cancellation {
        note!(
            global,
            "out-of-bin power {:.2} dB before, {:.2} dB after cancellation",
            c.out_of_bin_before_db,
            c.out_of_bin_after_db
        );
    }
    let report = RcReport {
        expected_profile_db: rc_power_profile(&model).into_iter().map(db10).collect(),
        realizations: draws
            .into_iter()
            .map(|(seed, r)| RealizationRepr {
                seed,
                total_power: r.total_power(),
                taps: r
                    .taps
                    .iter()
                    .map(|t| TapRepr {
                        delay_s: t.delay,
                        gain: t.gain,
                        power_db: db10(t.gain.norm_sqr()),
                    })
                    .collect(),
            })
            .collect(),
        cancellation,
        config: cfg,
    };
    emit(&report, report.config.out.as_deref())?;
    Ok(Outcome::Success)
}
