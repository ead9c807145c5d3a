use std::path::PathBuf;

use anyhow::{Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use wavemetro_core::ota::{add_awgn, apply_cfo, noise_power_for_snr};
use wavemetro_core::waveform::synthesize_ssb_bursts;
use wavemetro_core::{CellId, OfdmParams, SsbConfig};

use super::Outcome;
use crate::config::{load, pick, require_writable};
use crate::formats::{write_capture, Sidecar};
use crate::GlobalArgs;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Physical cell identity, 0..=1007.
    #[arg(long)]
    pub cell: Option<u16>,
    #[arg(long)]
    pub bursts: Option<usize>,
    /// DM-RS index of the first burst.
    #[arg(long)]
    pub i_ssb: Option<u8>,
    #[arg(long)]
    pub l_max: Option<u8>,
    /// Samples between consecutive SSBs.
    #[arg(long)]
    pub period: Option<usize>,
    /// Linear power per occupied resource element.
    #[arg(long)]
    pub re_power: Option<f64>,
    /// Per-RE SNR of added white noise; no noise when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub cfo_hz: Option<f64>,
    /// Zero samples before the first burst.
    #[arg(long)]
    pub lead_in: Option<usize>,
    /// Zero samples after the last burst.
    #[arg(long)]
    pub tail: Option<usize>,
}

/// Effective generator settings, echoed into the sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenerateConfig {
    pub cell: u16,
    pub i_ssb_bar: u8,
    pub l_max: u8,
    pub burst_count: usize,
    pub burst_period: usize,
    pub re_power: f64,
    pub snr_db: Option<f64>,
    pub cfo_hz: f64,
    pub lead_in: usize,
    pub tail: usize,
    pub center_freq_hz: f64,
    pub seed: u64,
    pub ofdm: OfdmParams,
    pub out: Option<PathBuf>,
}

impl Default for GenerateConfig {
    fn default() -> Self {
        let ssb = SsbConfig::new(CellId::from_cell(3).expect("valid cell"));
        Self {
            cell: 3,
            i_ssb_bar: ssb.i_ssb_bar,
            l_max: ssb.l_max,
            burst_count: 8,
            burst_period: ssb.burst_period,
            re_power: ssb.re_power,
            snr_db: None,
            cfo_hz: 0.0,
            lead_in: 500,
            tail: 500,
            center_freq_hz: 0.0,
            seed: 0,
            ofdm: OfdmParams::default(),
            out: None,
        }
    }
}

impl GenerateConfig {
    fn resolve(global: &GlobalArgs, args: &Args) -> Result<Self> {
        let c: Self = load(global.config.as_deref())?;
        Ok(Self {
            cell: pick(args.cell, c.cell),
            i_ssb_bar: pick(args.i_ssb, c.i_ssb_bar),
            l_max: pick(args.l_max, c.l_max),
            burst_count: pick(args.bursts, c.burst_count),
            burst_period: pick(args.period, c.burst_period),
            re_power: pick(args.re_power, c.re_power),
            snr_db: args.snr_db.or(c.snr_db),
            cfo_hz: pick(args.cfo_hz, c.cfo_hz),
            lead_in: pick(args.lead_in, c.lead_in),
            tail: pick(args.tail, c.tail),
            seed: pick(global.seed, c.seed),
            out: global.out.clone().or(c.out),
            ..c
        })
    }
}

pub fn run(global: &GlobalArgs, args: &Args) -> Result<Outcome> {
    let cfg = GenerateConfig::resolve(global, args)?;
    let out = cfg.out.clone().context("generate needs an output path (--out)")?;
    require_writable(&out)?;
    cfg.ofdm.validate()?;
    let ssb = SsbConfig {
        cell_id: CellId::from_cell(cfg.cell)?,
        i_ssb_bar: cfg.i_ssb_bar,
        l_max: cfg.l_max,
        burst_count: cfg.burst_count,
        burst_period: cfg.burst_period,
        re_power: cfg.re_power,
    };
    let mut cap = synthesize_ssb_bursts(&ssb, &cfg.ofdm, cfg.lead_in, cfg.tail)?;
    cap.center_freq = cfg.center_freq_hz;
    apply_cfo(&mut cap, cfg.cfo_hz);
    if let Some(snr) = cfg.snr_db {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        add_awgn(&mut cap, noise_power_for_snr(cfg.re_power, snr), &mut rng);
    }
    let mut extra = serde_json::Map::new();
    // The output path is left out so that identical runs give identical bytes.
    let echo = GenerateConfig { out: None, ..cfg.clone() };
    extra.insert("generator".into(), serde_json::to_value(&echo)?);
    let sidecar = Sidecar {
        sample_rate_hz: cap.sample_rate,
        center_freq_hz: cap.center_freq,
        scale: 1.0,
        created_by: concat!("wavemetro ", env!("CARGO_PKG_VERSION")).into(),
        seed: Some(cfg.seed),
        extra,
    };
    write_capture(&out, &cap, &sidecar)?;
    note!(global, "wrote {} samples ({} bursts) to {}", cap.len(), cfg.burst_count, out.display());
    Ok(Outcome::Success)
}
