use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use wavemetro_core::detector::{BurstDetection, BurstSearch, DEFAULT_SSS_THRESHOLD, DEFAULT_THRESHOLD};
use wavemetro_core::{CellId, DetectionResult, IqCapture, OfdmParams};

use super::Outcome;
use crate::config::{load, pick, require_file, require_writable};
use crate::formats::read_capture;
use crate::report::emit;
use crate::GlobalArgs;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// IQ capture; its sidecar must sit at `<capture>.json`.
    pub capture: Option<PathBuf>,
    /// SSS metric a PSS candidate needs to count as a burst.
    #[arg(long)]
    pub sss_threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectConfig {
    pub capture: Option<PathBuf>,
    pub threshold: f64,
    pub sss_threshold: f64,
    pub ofdm: OfdmParams,
    pub out: Option<PathBuf>,
}

impl Default for DetectConfig {
    fn default() -> Self {
        Self {
            capture: None,
            threshold: DEFAULT_THRESHOLD,
            sss_threshold: DEFAULT_SSS_THRESHOLD,
            ofdm: OfdmParams::default(),
            out: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellIdRepr {
    pub n1: u16,
    pub n2: u8,
    pub cell: u16,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub pss: f64,
    pub sss: f64,
    pub dmrs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BurstRepr {
    pub timing_sample: usize,
    pub i_ssb_bar: u8,
    pub cfo_hz: f64,
    pub metrics: Metrics,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConflictRepr {
    pub timing_sample: usize,
    pub cell_id: CellIdRepr,
    pub sss_metric: f64,
}

/// Detection report as written to disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub config: DetectConfig,
    pub cell_id: Option<CellIdRepr>,
    pub cfo_hz: f64,
    pub bursts: Vec<BurstRepr>,
    #[serde(default)]
    pub conflicts: Vec<ConflictRepr>,
}

fn cell_repr(c: CellId) -> CellIdRepr {
    CellIdRepr {
        n1: c.n1(),
        n2: c.n2(),
        cell: c.cell(),
    }
}

impl DetectionReport {
    pub fn new(config: DetectConfig, d: &DetectionResult) -> Self {
        Self {
            config,
            cell_id: d.cell_id.map(cell_repr),
            cfo_hz: d.cfo,
            bursts: d
                .bursts
                .iter()
                .map(|b| BurstRepr {
                    timing_sample: b.timing,
                    i_ssb_bar: b.i_ssb_bar,
                    cfo_hz: b.cfo,
                    metrics: Metrics {
                        pss: b.pss_metric,
                        sss: b.sss_metric,
                        dmrs: b.dmrs_metric,
                    },
                })
                .collect(),
            conflicts: d
                .conflicts
                .iter()
                .map(|c| ConflictRepr {
                    timing_sample: c.timing,
                    cell_id: cell_repr(c.cell_id),
                    sss_metric: c.sss_metric,
                })
                .collect(),
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading detection report {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing detection report {}", path.display()))
    }

    /// Rebuilds the detection the report was written from.
    pub fn to_detection(&self) -> Result<DetectionResult> {
        let cell_id = match self.cell_id {
            None => None,
            Some(c) => {
                let id = CellId::new(c.n1, c.n2)?;
                if id.cell() != c.cell {
                    bail!("detection report cell {} disagrees with n1={} n2={}", c.cell, c.n1, c.n2);
                }
                Some(id)
            }
        };
        Ok(DetectionResult {
            cell_id,
            bursts: self
                .bursts
                .iter()
                .map(|b| BurstDetection {
                    timing: b.timing_sample,
                    i_ssb_bar: b.i_ssb_bar,
                    pss_metric: b.metrics.pss,
                    sss_metric: b.metrics.sss,
                    dmrs_metric: b.metrics.dmrs,
                    cfo: b.cfo_hz,
                })
                .collect(),
            cfo: self.cfo_hz,
            conflicts: Vec::new(),
        })
    }
}

/// Fails when the capture was not recorded at the numerology's rate.
pub fn check_rate(cap: &IqCapture, params: &OfdmParams) -> Result<()> {
    let want = params.sample_rate();
    if (cap.sample_rate - want).abs() > 1e-9 * want {
        bail!(
            "capture sample rate {} Hz does not match the numerology ({} Hz); adjust `ofdm` in the config",
            cap.sample_rate,
            want
        );
    }
    Ok(())
}

pub fn run(global: &GlobalArgs, args: &Args) -> Result<Outcome> {
    let c: DetectConfig = load(global.config.as_deref())?;
    let cfg = DetectConfig {
        capture: args.capture.clone().or(c.capture),
        threshold: pick(global.threshold, c.threshold),
        sss_threshold: pick(args.sss_threshold, c.sss_threshold),
        out: global.out.clone().or(c.out),
        ..c
    };
    let capture = cfg.capture.clone().context("detect needs a capture path")?;
    require_file(&capture, "capture")?;
    if let Some(out) = &cfg.out {
        require_writable(out)?;
    }
    cfg.ofdm.validate()?;
    let (cap, _) = read_capture(&capture)?;
    check_rate(&cap, &cfg.ofdm)?;
    let search = BurstSearch {
        pss_threshold: cfg.threshold,
        sss_threshold: cfg.sss_threshold,
    };
    let result = search.run(&cap, &cfg.ofdm)?;
    note!(global, "{} samples searched, {} bursts found", cap.len(), result.bursts.len());
    let report = DetectionReport::new(cfg.clone(), &result);
    emit(&report, cfg.out.as_deref())?;
    if result.is_empty() {
        return Ok(Outcome::NoFindings(format!("no SSB found in {}", capture.display())));
    }
    Ok(Outcome::Success)
}
