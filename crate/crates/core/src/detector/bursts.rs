use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::dmrs::identify_ssb_index;
use super::pss::{detect_pss, PssCandidate};
use super::sss::{demodulate_candidate, sss_from_grid};
use super::{DEFAULT_SSS_THRESHOLD, DEFAULT_THRESHOLD};
use crate::waveform::{CellId, OfdmParams, ResourceGrid};
use crate::{Error, IqCapture, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BurstDetection {
    pub timing: usize,
    pub i_ssb_bar: u8,
    pub pss_metric: f64,
    pub sss_metric: f64,
    pub dmrs_metric: f64,
    pub cfo: f64,
}

/// A burst whose SSS pointed at a different cell than the majority.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellConflict {
    pub timing: usize,
    pub cell_id: CellId,
    pub sss_metric: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionResult {
    /// Majority cell identity; `None` when nothing was detected.
    pub cell_id: Option<CellId>,
    /// Bursts of the majority cell, sorted by timing.
    pub bursts: Vec<BurstDetection>,
    /// Mean CFO over the reported bursts, Hz.
    pub cfo: f64,
    pub conflicts: Vec<CellConflict>,
}

impl DetectionResult {
    pub fn is_empty(&self) -> bool {
        self.bursts.is_empty()
    }
}

/// Full cell search over a capture with the default SSS confirmation.
pub fn enumerate_ssb_bursts(
    capture: &IqCapture,
    params: &OfdmParams,
    threshold: f64,
) -> Result<DetectionResult> {
    BurstSearch {
        pss_threshold: threshold,
        ..BurstSearch::default()
    }
    .run(capture, params)
}

/// Two-stage burst search.
///
/// PSS candidates at or above `pss_threshold` closer than one SSB are
/// merged (the stronger survives). Each survivor gets an SSS decision and
/// is kept only if its SSS metric reaches `sss_threshold`. The cell
/// identity is the majority vote and every burst of that cell gets a DM-RS
/// index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BurstSearch {
    pub pss_threshold: f64,
    pub sss_threshold: f64,
}

impl Default for BurstSearch {
    fn default() -> Self {
        Self {
            pss_threshold: DEFAULT_THRESHOLD,
            sss_threshold: DEFAULT_SSS_THRESHOLD,
        }
    }
}

impl BurstSearch {
    pub fn run(&self, capture: &IqCapture, params: &OfdmParams) -> Result<DetectionResult> {
        if !(0.0..1.0).contains(&self.sss_threshold) {
            return Err(Error::config(format!(
                "SSS threshold must lie in [0, 1), got {}",
                self.sss_threshold
            )));
        }
        let cands = detect_pss(capture, params, self.pss_threshold)?;
        let merged = merge_candidates(cands, params.ssb_len());

        let mut decoded = Vec::new();
        for cand in merged {
            let Ok(grid) = demodulate_candidate(capture, &cand, params) else {
                // Runs off the end of the capture.
                continue;
            };
            let (n1, sss_metric) = sss_from_grid(&grid, cand.n2)?;
            if sss_metric < self.sss_threshold {
                continue;
            }
            let cell = CellId::new(n1, cand.n2)?;
            decoded.push((cand, cell, sss_metric, grid));
        }
        vote(decoded)
    }
}

fn vote(decoded: Vec<(PssCandidate, CellId, f64, ResourceGrid)>) -> Result<DetectionResult> {
    let mut votes: BTreeMap<CellId, (usize, f64)> = BTreeMap::new();
    for (_, cell, m, _) in &decoded {
        let v = votes.entry(*cell).or_default();
        v.0 += 1;
        v.1 += m;
    }
    let winner = votes
        .iter()
        .max_by(|a, b| a.1 .0.cmp(&b.1 .0).then(a.1 .1.total_cmp(&b.1 .1)))
        .map(|(c, _)| *c);

    let mut bursts = Vec::new();
    let mut conflicts = Vec::new();
    for (cand, cell, sss_metric, grid) in decoded {
        if Some(cell) == winner {
            let (i_ssb_bar, dmrs_metric) = identify_ssb_index(&grid, cell)?;
            bursts.push(BurstDetection {
                timing: cand.timing,
                i_ssb_bar,
                pss_metric: cand.metric,
                sss_metric,
                dmrs_metric,
                cfo: cand.cfo,
            });
        } else {
            conflicts.push(CellConflict {
                timing: cand.timing,
                cell_id: cell,
                sss_metric,
            });
        }
    }
    let cfo = if bursts.is_empty() {
        0.0
    } else {
        bursts.iter().map(|b| b.cfo).sum::<f64>() / bursts.len() as f64
    };
    Ok(DetectionResult {
        cell_id: winner,
        bursts,
        cfo,
        conflicts,
    })
}

/// Greedy merge keeping the strongest candidate within each `window`;
/// output sorted by timing.
fn merge_candidates(mut cands: Vec<PssCandidate>, window: usize) -> Vec<PssCandidate> {
    cands.sort_by(|a, b| b.metric.total_cmp(&a.metric).then(a.timing.cmp(&b.timing)));
    let mut kept: Vec<PssCandidate> = Vec::new();
    for c in cands {
        if kept.iter().all(|k| k.timing.abs_diff(c.timing) >= window) {
            kept.push(c);
        }
    }
    kept.sort_by_key(|c| c.timing);
    kept
}
