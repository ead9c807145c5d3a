use std::path::PathBuf;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use wavemetro_core::detector::{BurstSearch, DEFAULT_SSS_THRESHOLD, DEFAULT_THRESHOLD};
use wavemetro_core::exposure::{
    code_selective_power, combine_uncertainty, default_components, ExposureReport, MeasurementMode,
    UncertaintyComponent, DEFAULT_COVERAGE_FACTOR,
};
use wavemetro_core::OfdmParams;

use super::detect::{check_rate, CellIdRepr, DetectionReport};
use super::Outcome;
use crate::config::{load, pick, require_file, require_writable};
use crate::formats::read_capture;
use crate::report::emit;
use crate::GlobalArgs;

#[derive(Debug, clap::Args)]
pub struct Args {
    pub capture: Option<PathBuf>,
    /// Detection report to measure at; detection runs afresh when absent.
    #[arg(long)]
    pub detection: Option<PathBuf>,
    /// Resource blocks of the carrier.
    #[arg(long)]
    pub rb_count: Option<usize>,
    /// Time-averaged duty factor in (0, 1].
    #[arg(long)]
    pub duty: Option<f64>,
    /// conducted or ota.
    #[arg(long)]
    pub mode: Option<MeasurementMode>,
    #[arg(long)]
    pub coverage_factor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExposureConfig {
    pub capture: Option<PathBuf>,
    pub detection: Option<PathBuf>,
    pub threshold: f64,
    pub sss_threshold: f64,
    pub rb_count: usize,
    pub duty: f64,
    pub mode: MeasurementMode,
    pub coverage_factor: f64,
    pub uncertainty: Vec<UncertaintyComponent>,
    pub ofdm: OfdmParams,
    pub out: Option<PathBuf>,
}

impl Default for ExposureConfig {
    fn default() -> Self {
        Self {
            capture: None,
            detection: None,
            threshold: DEFAULT_THRESHOLD,
            sss_threshold: DEFAULT_SSS_THRESHOLD,
            rb_count: 273,
            duty: 1.0,
            mode: MeasurementMode::Conducted,
            coverage_factor: DEFAULT_COVERAGE_FACTOR,
            uncertainty: default_components(),
            ofdm: OfdmParams::default(),
            out: None,
        }
    }
}

#[derive(Debug, Serialize)]
struct Report {
    config: ExposureConfig,
    cell_id: Option<CellIdRepr>,
    bursts_measured: usize,
    #[serde(flatten)]
    exposure: ExposureReport,
}

pub fn run(global: &GlobalArgs, args: &Args) -> Result<Outcome> {
    let c: ExposureConfig = load(global.config.as_deref())?;
    let cfg = ExposureConfig {
        capture: args.capture.clone().or(c.capture),
        detection: args.detection.clone().or(c.detection),
        threshold: pick(global.threshold, c.threshold),
        rb_count: pick(args.rb_count, c.rb_count),
        duty: pick(args.duty, c.duty),
        mode: pick(args.mode, c.mode),
        coverage_factor: pick(args.coverage_factor, c.coverage_factor),
        out: global.out.clone().or(c.out),
        ..c
    };
    let capture = cfg.capture.clone().context("exposure needs a capture path")?;
    require_file(&capture, "capture")?;
    if let Some(d) = &cfg.detection {
        require_file(d, "detection report")?;
    }
    if let Some(out) = &cfg.out {
        require_writable(out)?;
    }
    cfg.ofdm.validate()?;
    let budget = combine_uncertainty(cfg.uncertainty.clone(), cfg.coverage_factor)?;

    let (cap, _) = read_capture(&capture)?;
    check_rate(&cap, &cfg.ofdm)?;
    let detection = match &cfg.detection {
        Some(path) => DetectionReport::read(path)?.to_detection()?,
        None => BurstSearch {
            pss_threshold: cfg.threshold,
            sss_threshold: cfg.sss_threshold,
        }
        .run(&cap, &cfg.ofdm)?,
    };
    if detection.is_empty() || detection.cell_id.is_none() {
        return Ok(Outcome::NoFindings("no detected bursts to measure".into()));
    }
    let powers = code_selective_power(&cap, &detection, &cfg.ofdm)?;
    let exposure = ExposureReport::new(powers, cfg.rb_count, cfg.duty, budget, cfg.mode)?;
    note!(
        global,
        "{} bursts measured, extrapolated {:.2} dB",
        detection.bursts.len(),
        exposure.extrapolated_power_db
    );
    let report = Report {
        cell_id: detection.cell_id.map(|c| CellIdRepr {
            n1: c.n1(),
            n2: c.n2(),
            cell: c.cell(),
        }),
        bursts_measured: detection.bursts.len(),
        exposure,
        config: cfg,
    };
    emit(&report, report.config.out.as_deref())?;
    Ok(Outcome::Success)
}
