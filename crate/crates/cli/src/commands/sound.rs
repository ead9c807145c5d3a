use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use wavemetro_core::sounding::{
    beamform, cir_to_pdp, compensate_phase, deembed_pattern, sweep_to_cir, AoaOptions, Cir, FrequencySweep,
    Steering, VirtualArrayScan, Window, DEFAULT_PATTERN_MASK_DB,
};

use super::Outcome;
use crate::config::{load, pick, require_file, require_writable};
use crate::formats::{read_sweep, Geometry};
use crate::report::{db2, emit};
use crate::GlobalArgs;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Sweep CSV files; one per array element in AoA mode.
    pub sweeps: Vec<PathBuf>,
    /// Array geometry JSON; enables the angle/delay map.
    #[arg(long)]
    pub geometry: Option<PathBuf>,
    /// Output CSV of the angle/delay map.
    #[arg(long)]
    pub aoa_out: Option<PathBuf>,
    /// Remove the common phase drift using the pilot columns.
    #[arg(long)]
    pub compensate: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub angle_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub angle_max: Option<f64>,
    #[arg(long)]
    pub angle_step: Option<f64>,
    /// Steer with one phase per element at this frequency instead of
    /// true time delay.
    #[arg(long)]
    pub narrowband_hz: Option<f64>,
    /// Pattern de-embedding mask below the pattern peak, dB.
    #[arg(long, allow_hyphen_values = true)]
    pub mask_db: Option<f64>,
    /// Lowest level listed as a peak, dB below the maximum.
    #[arg(long, allow_hyphen_values = true)]
    pub peak_floor_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SoundConfig {
    pub sweeps: Vec<PathBuf>,
    pub geometry: Option<PathBuf>,
    pub window: Window,
    pub pad: usize,
    pub compensate_phase: bool,
    pub angle_min_deg: f64,
    pub angle_max_deg: f64,
    pub angle_step_deg: f64,
    pub steering: Steering,
    pub mask_db: f64,
    pub peak_floor_db: f64,
    pub out: Option<PathBuf>,
    pub aoa_out: Option<PathBuf>,
}

impl Default for SoundConfig {
    fn default() -> Self {
        Self {
            sweeps: Vec::new(),
            geometry: None,
            window: Window::Hann,
            pad: 1,
            compensate_phase: false,
            angle_min_deg: -90.0,
            angle_max_deg: 90.0,
            angle_step_deg: 1.0,
            steering: Steering::TrueTimeDelay,
            mask_db: DEFAULT_PATTERN_MASK_DB,
            peak_floor_db: -20.0,
            out: None,
            aoa_out: None,
        }
    }
}

impl SoundConfig {
    fn resolve(global: &GlobalArgs, args: &Args) -> Result<Self> {
        let c: Self = load(global.config.as_deref())?;
        let window = match &global.window {
            Some(name) => name.parse()?,
            None => c.window,
        };
        Ok(Self {
            sweeps: if args.sweeps.is_empty() { c.sweeps } else { args.sweeps.clone() },
            geometry: args.geometry.clone().or(c.geometry),
            window,
            pad: pick(global.pad, c.pad),
            compensate_phase: args.compensate || c.compensate_phase,
            angle_min_deg: pick(args.angle_min, c.angle_min_deg),
            angle_max_deg: pick(args.angle_max, c.angle_max_deg),
            angle_step_deg: pick(args.angle_step, c.angle_step_deg),
            steering: match args.narrowband_hz {
                Some(f) => Steering::Narrowband { reference_freq: f },
                None => c.steering,
            },
            mask_db: pick(args.mask_db, c.mask_db),
            peak_floor_db: pick(args.peak_floor_db, c.peak_floor_db),
            out: global.out.clone().or(c.out),
            aoa_out: args.aoa_out.clone().or(c.aoa_out),
        })
    }

    fn angles(&self) -> Result<Vec<f64>> {
        let (lo, hi, step) = (self.angle_min_deg, self.angle_max_deg, self.angle_step_deg);
        if !(step > 0.0) || !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            bail!("angle grid needs angle_min <= angle_max and a positive step");
        }
        let n = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|i| lo + i as f64 * step).collect())
    }
}

#[derive(Debug, Serialize)]
struct DelayPeak {
    delay_s: f64,
    power_db: f64,
}

#[derive(Debug, Serialize)]
struct AngleDelayPeak {
    angle_deg: f64,
    delay_s: f64,
    power_db: f64,
}

#[derive(Debug, Serialize)]
struct AoaSummary {
    elements: usize,
    angles: usize,
    invalid_angles: Vec<f64>,
    peak: AngleDelayPeak,
    local_maxima: Vec<AngleDelayPeak>,
}

#[derive(Debug, Serialize)]
struct Report {
    config: SoundConfig,
    points: usize,
    delay_resolution_s: f64,
    bin_spacing_s: f64,
    max_delay_s: f64,
    noise_floor_db: f64,
    peaks: Vec<DelayPeak>,
    aoa: Option<AoaSummary>,
}

/// Tap powers averaged over elements, as a CIR with real taps.
fn average_power(cirs: &[Cir]) -> Cir {
    let n = cirs.len() as f64;
    let taps = (0..cirs[0].len())
        .map(|k| {
            let p = cirs.iter().map(|c| c.taps[k].norm_sqr()).sum::<f64>() / n;
            Complex64::new(p.sqrt(), 0.0)
        })
        .collect();
    Cir { taps, ..cirs[0].clone() }
}

fn write_csv(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn run(global: &GlobalArgs, args: &Args) -> Result<Outcome> {
    let cfg = SoundConfig::resolve(global, args)?;
    if cfg.sweeps.is_empty() {
        bail!("sound needs at least one sweep CSV");
    }
    for s in &cfg.sweeps {
        require_file(s, "sweep")?;
    }
    if let Some(g) = &cfg.geometry {
        require_file(g, "geometry")?;
    }
    let out = cfg.out.clone().context("sound needs a PDP output path (--out)")?;
    require_writable(&out)?;
    let aoa_out = match (&cfg.geometry, &cfg.aoa_out) {
        (Some(_), Some(p)) => Some(p.clone()),
        (Some(_), None) => bail!("AoA mode needs an output path for the angle/delay map (--aoa-out)"),
        (None, _) => None,
    };
    if let Some(p) = &aoa_out {
        require_writable(p)?;
    }
    let angles = cfg.angles()?;
    if cfg.geometry.is_none() && cfg.sweeps.len() > 1 {
        bail!("{} sweeps given without a geometry file", cfg.sweeps.len());
    }

    let mut sweeps: Vec<FrequencySweep> = cfg.sweeps.iter().map(|p| read_sweep(p)).collect::<Result<_>>()?;
    if cfg.compensate_phase {
        sweeps = sweeps.iter().map(compensate_phase).collect::<Result<_, _>>()?;
    }
    let cirs: Vec<Cir> = sweeps
        .iter()
        .map(|s| sweep_to_cir(s, cfg.window, cfg.pad))
        .collect::<Result<_, _>>()?;
    let cir = if cirs.len() == 1 { cirs[0].clone() } else { average_power(&cirs) };
    let pdp = cir_to_pdp(&cir)?;

    let mut csv = String::from("delay_s,power_db\n");
    for (d, p) in pdp.delays.iter().zip(&pdp.power_db) {
        writeln!(csv, "{d:e},{:.2}", db2(*p))?;
    }
    write_csv(&out, &csv)?;
    note!(global, "PDP with {} bins written to {}", pdp.delays.len(), out.display());

    let peaks = pdp
        .local_maxima(cfg.peak_floor_db)
        .into_iter()
        .map(|i| DelayPeak {
            delay_s: pdp.delays[i],
            power_db: pdp.power_db[i],
        })
        .collect();

    let aoa = match (&cfg.geometry, &aoa_out) {
        (Some(gpath), Some(aoa_path)) => {
            let geometry = Geometry::read(gpath)?;
            if geometry.positions.len() != sweeps.len() {
                bail!(
                    "geometry lists {} elements but {} sweeps were given",
                    geometry.positions.len(),
                    sweeps.len()
                );
            }
            let mut scan = VirtualArrayScan::new(geometry.positions.clone(), sweeps.clone())?;
            if let Some(p) = geometry.element_pattern()? {
                scan = scan.with_pattern(p);
            }
            let opts = AoaOptions {
                window: cfg.window,
                pad_factor: cfg.pad,
                steering: cfg.steering,
            };
            let mut profile = beamform(&scan, &angles, &opts)?;
            if scan.pattern.is_some() {
                profile = deembed_pattern(&scan, &profile, cfg.mask_db)?;
            }
            let map = profile.to_db();
            let mut csv = String::from("angle_deg,delay_s,power_db,valid\n");
            for ((a, row), ok) in map.angles_deg.iter().zip(&map.power_db).zip(&map.valid) {
                for (d, p) in map.delays.iter().zip(row) {
                    writeln!(csv, "{a},{d:e},{:.2},{ok}", db2(*p))?;
                }
            }
            write_csv(aoa_path, &csv)?;
            note!(global, "angle/delay map written to {}", aoa_path.display());
            let cell = |(i, j): (usize, usize)| AngleDelayPeak {
                angle_deg: map.angles_deg[i],
                delay_s: map.delays[j],
                power_db: map.power_db[i][j],
            };
            Some(AoaSummary {
                elements: scan.n_elements(),
                angles: angles.len(),
                invalid_angles: map
                    .angles_deg
                    .iter()
                    .zip(&map.valid)
                    .filter(|(_, ok)| !**ok)
                    .map(|(a, _)| *a)
                    .collect(),
                peak: cell(map.peak()),
                local_maxima: map.local_maxima(cfg.peak_floor_db).into_iter().map(cell).collect(),
            })
        }
        _ => None,
    };

    let report = Report {
        points: sweeps[0].len(),
        delay_resolution_s: cir.delay_resolution,
        bin_spacing_s: cir.bin_spacing,
        max_delay_s: cir.max_delay,
        noise_floor_db: pdp.noise_floor_db,
        peaks,
        aoa,
        config: cfg,
    };
    emit(&report, None)?;
    Ok(Outcome::Success)
}
