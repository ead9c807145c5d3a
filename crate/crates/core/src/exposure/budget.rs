use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const DEFAULT_COVERAGE_FACTOR: f64 = 2.0;

/// Probability distribution assumed for a budget component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distribution {
    Normal,
    Rectangular,
    Triangular,
    UShaped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyComponent {
    pub name: String,
    /// Standard uncertainty, dB.
    pub u_db: f64,
    pub distribution: Distribution,
    /// Set for shipped default values that are not backed by a measurement.
    #[serde(default)]
    pub placeholder: bool,
}

impl UncertaintyComponent {
    pub fn new(name: impl Into<String>, u_db: f64, distribution: Distribution) -> Self {
        Self {
            name: name.into(),
            u_db,
            distribution,
            placeholder: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyBudget {
    pub components: Vec<UncertaintyComponent>,
    pub coverage_factor: f64,
    /// `k * sqrt(sum u_i^2)`, dB.
    pub expanded_db: f64,
}

/// Default components for code-selective measurements. The values are
/// placeholders and are flagged as such in reports.
pub fn default_components() -> Vec<UncertaintyComponent> {
    [("correlation-loss", 0.01), ("quantization", 0.005), ("noise", 0.015)]
        .into_iter()
        .map(|(name, u)| UncertaintyComponent {
            placeholder: true,
            ..UncertaintyComponent::new(name, u, Distribution::Normal)
        })
        .collect()
}

/// Root-sum-square combination with coverage factor `k`.
pub fn combine_uncertainty(components: Vec<UncertaintyComponent>, k: f64) -> Result<UncertaintyBudget> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::domain(format!("coverage factor must be positive, got {k}")));
    }
    if let Some(c) = components.iter().find(|c| !(c.u_db >= 0.0) || !c.u_db.is_finite()) {
        return Err(Error::domain(format!(
            "component '{}' has invalid standard uncertainty {}",
            c.name, c.u_db
        )));
    }
    let rss = components.iter().map(|c| c.u_db * c.u_db).sum::<f64>().sqrt();
    Ok(UncertaintyBudget {
        components,
        coverage_factor: k,
        expanded_db: k * rss,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasurementMode {
    Conducted,
    Ota,
}

impl MeasurementMode {
    /// Largest acceptable expanded uncertainty, dB.
    pub fn target_db(self) -> f64 {
        match self {
            MeasurementMode::Conducted => 0.05,
            MeasurementMode::Ota => 0.5,
        }
    }
}

impl FromStr for MeasurementMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "conducted" => Ok(MeasurementMode::Conducted),
            "ota" => Ok(MeasurementMode::Ota),
            other => Err(Error::input(format!("unknown measurement mode '{other}' (expected conducted or ota)"))),
        }
    }
}

impl fmt::Display for MeasurementMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasurementMode::Conducted => "conducted",
            MeasurementMode::Ota => "ota",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetCheck {
    pub mode: MeasurementMode,
    pub target_db: f64,
    pub expanded_db: f64,
    pub pass: bool,
    /// `target - expanded`; negative on failure.
    pub margin_db: f64,
}

pub fn check_targets(budget: &UncertaintyBudget, mode: MeasurementMode) -> TargetCheck {
    let target_db = mode.target_db();
    let margin_db = target_db - budget.expanded_db;
    TargetCheck {
        mode,
        target_db,
        expanded_db: budget.expanded_db,
        pass: margin_db >= -1e-12,
        margin_db,
    }
}
