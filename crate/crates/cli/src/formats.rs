//! File formats: raw IQ with a JSON sidecar, sweep CSV and array geometry.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use wavemetro_core::sounding::{ElementPattern, FrequencySweep, PatternPoint};
use wavemetro_core::IqCapture;

/// Metadata stored next to an IQ file at `<path>.json`.
///
/// Keys this tool does not know about are carried in `extra` and written
/// back unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct Sidecar {
    pub sample_rate_hz: f64,
    pub center_freq_hz: f64,
    /// Linear amplitude of one file unit.
    pub scale: f64,
    pub created_by: String,
    pub seed: Option<u64>,
    pub extra: Map<String, Value>,
}

const SIDECAR_KEYS: [&str; 5] = ["sample_rate_hz", "center_freq_hz", "scale", "created_by", "seed"];

impl Sidecar {
    pub fn from_value(value: Value) -> Result<Self> {
        let Value::Object(mut map) = value else {
            bail!("sidecar must be a JSON object");
        };
        let number = |map: &Map<String, Value>, key: &str| -> Result<f64> {
            match map.get(key) {
                None => bail!("sidecar field `{key}` is missing"),
                Some(v) => v
                    .as_f64()
                    .ok_or_else(|| anyhow!("sidecar field `{key}` must be a number, got {v}")),
            }
        };
        let sample_rate_hz = number(&map, "sample_rate_hz")?;
        let center_freq_hz = number(&map, "center_freq_hz")?;
        let scale = number(&map, "scale")?;
        if !(sample_rate_hz > 0.0) {
            bail!("sidecar field `sample_rate_hz` must be positive, got {sample_rate_hz}");
        }
        if !(scale > 0.0) {
            bail!("sidecar field `scale` must be positive, got {scale}");
        }
        let created_by = match map.get("created_by") {
            None => bail!("sidecar field `created_by` is missing"),
            Some(Value::String(s)) => s.clone(),
            Some(v) => bail!("sidecar field `created_by` must be a string, got {v}"),
        };
        let seed = match map.get("seed") {
            None | Some(Value::Null) => None,
            Some(v) => Some(
                v.as_u64()
                    .ok_or_else(|| anyhow!("sidecar field `seed` must be a non-negative integer, got {v}"))?,
            ),
        };
        for key in SIDECAR_KEYS {
            map.remove(key);
        }
        Ok(Self {
            sample_rate_hz,
            center_freq_hz,
            scale,
            created_by,
            seed,
            extra: map,
        })
    }

    pub fn to_value(&self) -> Value {
        let mut map = self.extra.clone();
        map.insert("sample_rate_hz".into(), self.sample_rate_hz.into());
        map.insert("center_freq_hz".into(), self.center_freq_hz.into());
        map.insert("scale".into(), self.scale.into());
        map.insert("created_by".into(), self.created_by.clone().into());
        if let Some(seed) = self.seed {
            map.insert("seed".into(), seed.into());
        }
        Value::Object(map)
    }
}

pub fn sidecar_path(iq: &Path) -> PathBuf {
    let mut s = iq.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub fn read_sidecar(iq: &Path) -> Result<Sidecar> {
    let path = sidecar_path(iq);
    let text = fs::read_to_string(&path).with_context(|| format!("reading sidecar {}", path.display()))?;
    let value: Value =
        serde_json::from_str(&text).with_context(|| format!("parsing sidecar {}", path.display()))?;
    Sidecar::from_value(value).with_context(|| format!("in sidecar {}", path.display()))
}

pub fn write_sidecar(iq: &Path, sidecar: &Sidecar) -> Result<()> {
    let path = sidecar_path(iq);
    let text = serde_json::to_string_pretty(&sidecar.to_value())? + "\n";
    fs::write(&path, text).with_context(|| format!("writing sidecar {}", path.display()))
}

/// Reads a capture and its sidecar. Samples are file values times `scale`.
pub fn read_capture(path: &Path) -> Result<(IqCapture, Sidecar)> {
    let sidecar = read_sidecar(path)?;
    let bytes = fs::read(path).with_context(|| format!("reading capture {}", path.display()))?;
    if bytes.len() % 4 != 0 {
        bail!(
            "capture {} is {} bytes, not a whole number of 32-bit floats",
            path.display(),
            bytes.len()
        );
    }
    if bytes.len() % 8 != 0 {
        bail!(
            "capture {} holds an odd number of floats ({}); expected I/Q pairs",
            path.display(),
            bytes.len() / 4
        );
    }
    let samples = bytes
        .chunks_exact(8)
        .map(|c| {
            let re = f32::from_le_bytes([c[0], c[1], c[2], c[3]]);
            let im = f32::from_le_bytes([c[4], c[5], c[6], c[7]]);
            Complex64::new(re as f64, im as f64) * sidecar.scale
        })
        .collect();
    let cap = IqCapture {
        samples,
        sample_rate: sidecar.sample_rate_hz,
        center_freq: sidecar.center_freq_hz,
        scale: sidecar.scale,
    };
    cap.validate().with_context(|| format!("capture {}", path.display()))?;
    Ok((cap, sidecar))
}

pub fn write_capture(path: &Path, cap: &IqCapture, sidecar: &Sidecar) -> Result<()> {
    let mut bytes = Vec::with_capacity(cap.len() * 8);
    for s in &cap.samples {
        bytes.extend_from_slice(&((s.re / sidecar.scale) as f32).to_le_bytes());
        bytes.extend_from_slice(&((s.im / sidecar.scale) as f32).to_le_bytes());
    }
    fs::write(path, bytes).with_context(|| format!("writing capture {}", path.display()))?;
    write_sidecar(path, sidecar)
}

const SWEEP_COLUMNS: [&str; 6] = ["freq_hz", "re", "im", "pilot_re", "pilot_im", "timestamp_s"];

/// Reads `freq_hz,re,im[,pilot_re,pilot_im,timestamp_s]`.
pub fn read_sweep(path: &Path) -> Result<FrequencySweep> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("opening sweep {}", path.display()))?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    let width = header.len();
    if !matches!(width, 3 | 5 | 6) || header.iter().zip(SWEEP_COLUMNS).any(|(h, want)| h != want) {
        bail!(
            "sweep {} header must be freq_hz,re,im[,pilot_re,pilot_im,timestamp_s], got {}",
            path.display(),
            header.join(",")
        );
    }
    let mut freqs = Vec::new();
    let mut h = Vec::new();
    let mut pilot = Vec::new();
    let mut stamps = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.with_context(|| format!("sweep {} row {}", path.display(), i + 2))?;
        if record.len() != width {
            bail!("sweep {} row {} has {} fields, expected {width}", path.display(), i + 2, record.len());
        }
        let field = |c: usize| -> Result<f64> {
            record[c].parse::<f64>().map_err(|_| {
                anyhow!(
                    "sweep {} row {} column {}: '{}' is not a number",
                    path.display(),
                    i + 2,
                    SWEEP_COLUMNS[c],
                    &record[c]
                )
            })
        };
        freqs.push(field(0)?);
        h.push(Complex64::new(field(1)?, field(2)?));
        if width >= 5 {
            pilot.push(Complex64::new(field(3)?, field(4)?));
        }
        if width == 6 {
            stamps.push(field(5)?);
        }
    }
    let sweep = FrequencySweep {
        freqs,
        h,
        timestamps: (width == 6).then_some(stamps),
        pilot: (width >= 5).then_some(pilot),
    };
    sweep.validate().with_context(|| format!("sweep {}", path.display()))?;
    Ok(sweep)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternRow {
    pub angle_deg: f64,
    pub gain_db: f64,
    #[serde(default)]
    pub phase_deg: f64,
}

/// Virtual-array layout: element positions in meters and an optional
/// element pattern table.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    pub positions: Vec<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pattern: Vec<PatternRow>,
}

impl Geometry {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading geometry {}", path.display()))?;
        let g: Geometry =
            serde_json::from_str(&text).with_context(|| format!("parsing geometry {}", path.display()))?;
        if g.positions.iter().flatten().any(|x| !x.is_finite()) {
            bail!("geometry {} has a non-finite position", path.display());
        }
        Ok(g)
    }

    pub fn element_pattern(&self) -> Result<Option<ElementPattern>> {
        if self.pattern.is_empty() {
            return Ok(None);
        }
        let points = self
            .pattern
            .iter()
            .map(|r| PatternPoint {
                angle_deg: r.angle_deg,
                gain_db: r.gain_db,
                phase_deg: r.phase_deg,
            })
            .collect();
        Ok(Some(ElementPattern::new(points)?))
    }
}
