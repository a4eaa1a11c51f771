//! Experiment configuration read from TOML.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use dsmap_core::forward::DEFAULT_EXTRA_TERMS;
use dsmap_core::{Algorithm, DsmNormalization, FresnelSchema};

/// Invalid configuration, located by its dotted key path.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError { path: path.into(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "invalid config: {}", self.message)
        } else {
            write!(f, "invalid config: {}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub medium: Option<MediumSpec>,
    pub scene: SceneSpec,
    #[serde(default)]
    pub sensors: Option<SensorSpec>,
    pub incidence: IncidenceSpec,
    pub grid: GridSpec,
    #[serde(default)]
    pub forward: ForwardSpec,
    #[serde(default)]
    pub noise: NoiseSpec,
    pub run: RunSpec,
}

/// Background medium; give exactly one of the two.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumSpec {
    /// Metres.
    pub wavelength: Option<f64>,
    pub frequency_ghz: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneSpec {
    pub disks: Option<Vec<DiskSpec>>,
    pub fresnel: Option<FresnelSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskSpec {
    pub center: [f64; 2],
    pub radius: f64,
    /// Relative permittivity `ε/ε₀`.
    pub eps_r: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FresnelSpec {
    pub path: PathBuf,
    pub frequency_ghz: f64,
    /// Column spec such as `tx=1,rx=2,freq=3`; defaults to the standard order.
    pub schema: Option<String>,
    pub source_radius: Option<f64>,
    pub source_angles_deg: Option<Vec<f64>>,
    pub receiver_radius: Option<f64>,
    pub receiver_angles_deg: Option<Vec<f64>>,
    /// Known targets, used for the exact map, Ψ maps and detection distances.
    #[serde(default)]
    pub reference: Vec<DiskSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorSpec {
    pub radius: f64,
    pub count: usize,
    #[serde(default)]
    pub start_angle_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IncidenceSpec {
    pub counts: Vec<usize>,
    /// Angle of the first direction; 180° when omitted for disk scenes.
    pub start_angle_deg: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default)]
    pub center: [f64; 2],
    pub side: f64,
    pub cell: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ForwardModel {
    #[default]
    Asymptotic,
    Physical,
    Mie,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForwardSpec {
    #[serde(default)]
    pub model: ForwardModel,
    #[serde(default = "default_extra_terms")]
    pub mie_extra_terms: usize,
}

fn default_extra_terms() -> usize {
    DEFAULT_EXTRA_TERMS
}

impl Default for ForwardSpec {
    fn default() -> Self {
        ForwardSpec { model: ForwardModel::default(), mie_extra_terms: DEFAULT_EXTRA_TERMS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    #[serde(default)]
    pub enabled: bool,
    #[serde(default = "default_snr")]
    pub snr_db: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_snr() -> f64 {
    20.0
}

impl Default for NoiseSpec {
    fn default() -> Self {
        NoiseSpec { enabled: false, snr_db: default_snr(), seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalizationSpec {
    #[default]
    Holder,
    GridMax,
}

impl From<NormalizationSpec> for DsmNormalization {
    fn from(n: NormalizationSpec) -> Self {
        match n {
            NormalizationSpec::Holder => DsmNormalization::Holder,
            NormalizationSpec::GridMax => DsmNormalization::GridMax,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub algorithms: Vec<String>,
    #[serde(default = "default_kappa_steps")]
    pub kappa_steps: usize,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub dsm_normalization: NormalizationSpec,
}

fn default_kappa_steps() -> usize {
    101
}

fn positive(path: &str, v: f64) -> Result<(), ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::new(path, format!("must be a positive finite number, got {v}")))
    }
}

fn finite(path: &str, v: &[f64]) -> Result<(), ConfigError> {
    match v.iter().find(|x| !x.is_finite()) {
        Some(x) => Err(ConfigError::new(path, format!("must be finite, got {x}"))),
        None => Ok(()),
    }
}

fn check_disks(path: &str, disks: &[DiskSpec]) -> Result<(), ConfigError> {
    for (i, d) in disks.iter().enumerate() {
        finite(&format!("{path}[{i}].center"), &d.center)?;
        positive(&format!("{path}[{i}].radius"), d.radius)?;
        positive(&format!("{path}[{i}].eps_r"), d.eps_r)?;
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        Self::from_toml_with(text, &[])
    }

    /// Parses `text` after applying `key=value` overrides with dotted keys.
    /// Values are read as TOML, falling back to a bare string.
    pub fn from_toml_with(text: &str, overrides: &[String]) -> anyhow::Result<Self> {
        let mut table: toml::Table = text.parse()?;
        for item in overrides {
            apply_override(&mut table, item)?;
        }
        let config: ExperimentConfig = table.try_into()?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path, overrides: &[String]) -> anyhow::Result<Self> {
        use anyhow::Context;
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml_with(&text, overrides).with_context(|| format!("loading {}", path.display()))
    }

    pub fn algorithms(&self) -> Result<Vec<Algorithm>, ConfigError> {
        let mut out: Vec<Algorithm> = Vec::new();
        for (i, name) in self.run.algorithms.iter().enumerate() {
            let path = format!("run.algorithms[{i}]");
            let a: Algorithm =
                name.parse().map_err(|_| ConfigError::new(&path, format!("unknown algorithm `{name}`")))?;
            if a == Algorithm::Exact {
                return Err(ConfigError::new(&path, "the exact map is always written and cannot be requested"));
            }
            if out.contains(&a) {
                return Err(ConfigError::new(&path, format!("{a} listed twice")));
            }
            out.push(a);
        }
        Ok(out)
    }

    pub fn schema(&self) -> Result<FresnelSchema, ConfigError> {
        match self.scene.fresnel.as_ref().and_then(|f| f.schema.as_deref()) {
            Some(s) => s.parse().map_err(|e| ConfigError::new("scene.fresnel.schema", format!("{e}"))),
            None => Ok(FresnelSchema::default()),
        }
    }

    /// Disks with known geometry: the scene itself, or Fresnel references.
    pub fn known_disks(&self) -> &[DiskSpec] {
        match (&self.scene.disks, &self.scene.fresnel) {
            (Some(d), _) => d,
            (None, Some(f)) => &f.reference,
            (None, None) => &[],
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let algorithms = self.algorithms()?;
        if algorithms.is_empty() {
            return Err(ConfigError::new("run.algorithms", "must list at least one algorithm"));
        }
        if self.run.kappa_steps < 2 {
            return Err(ConfigError::new("run.kappa_steps", "must be at least 2"));
        }
        if self.run.output_dir.as_os_str().is_empty() {
            return Err(ConfigError::new("run.output_dir", "must not be empty"));
        }

        match (&self.scene.disks, &self.scene.fresnel) {
            (Some(_), Some(_)) => {
                return Err(ConfigError::new("scene", "give either `disks` or `fresnel`, not both"));
            }
            (None, None) => return Err(ConfigError::new("scene", "needs `disks` or `fresnel`")),
            (Some(disks), None) => {
                if disks.is_empty() {
                    return Err(ConfigError::new("scene.disks", "must list at least one disk"));
                }
                check_disks("scene.disks", disks)?;
                match &self.medium {
                    None => return Err(ConfigError::new("medium", "required for a disk scene")),
                    Some(m) => match (m.wavelength, m.frequency_ghz) {
                        (Some(w), None) => positive("medium.wavelength", w)?,
                        (None, Some(f)) => positive("medium.frequency_ghz", f)?,
                        _ => {
                            return Err(ConfigError::new(
                                "medium",
                                "give exactly one of `wavelength` or `frequency_ghz`",
                            ));
                        }
                    },
                }
                let s = self.sensors.ok_or_else(|| ConfigError::new("sensors", "required for a disk scene"))?;
                positive("sensors.radius", s.radius)?;
                if s.count == 0 {
                    return Err(ConfigError::new("sensors.count", "must be at least 1"));
                }
                finite("sensors.start_angle_deg", &[s.start_angle_deg])?;
                finite("incidence.start_angle_deg", &[self.incidence.start_angle_deg.unwrap_or(0.0)])?;
            }
            (None, Some(f)) => {
                if self.medium.is_some() {
                    return Err(ConfigError::new("medium", "set by scene.fresnel.frequency_ghz; remove this section"));
                }
                if self.sensors.is_some() {
                    return Err(ConfigError::new(
                        "sensors",
                        "receivers come from the Fresnel geometry; remove this section",
                    ));
                }
                if self.incidence.start_angle_deg.is_some() {
                    return Err(ConfigError::new("incidence.start_angle_deg", "not used with a Fresnel scene"));
                }
                if self.forward != ForwardSpec::default() {
                    return Err(ConfigError::new("forward", "not used with a Fresnel scene"));
                }
                positive("scene.fresnel.frequency_ghz", f.frequency_ghz)?;
                if f.path.as_os_str().is_empty() {
                    return Err(ConfigError::new("scene.fresnel.path", "must not be empty"));
                }
                self.schema()?;
                self.fresnel_geometry().validate().map_err(|e| ConfigError::new("scene.fresnel", format!("{e}")))?;
                check_disks("scene.fresnel.reference", &f.reference)?;
                let needs_scene =
                    algorithms.iter().any(|a| matches!(a, Algorithm::Psi1 | Algorithm::Psi2 | Algorithm::Psi3));
                if needs_scene && f.reference.is_empty() {
                    return Err(ConfigError::new("run.algorithms", "Ψ maps need scene.fresnel.reference disks"));
                }
            }
        }

        if self.incidence.counts.is_empty() {
            return Err(ConfigError::new("incidence.counts", "must list at least one count"));
        }
        let limit = self.scene.fresnel.as_ref().map(|_| self.fresnel_geometry().source_angles_deg.len());
        for (i, &l) in self.incidence.counts.iter().enumerate() {
            let path = format!("incidence.counts[{i}]");
            if l == 0 {
                return Err(ConfigError::new(&path, "must be at least 1"));
            }
            if let Some(max) = limit {
                if l > max {
                    return Err(ConfigError::new(&path, format!("only {max} sources are available")));
                }
            }
            if self.incidence.counts[..i].contains(&l) {
                return Err(ConfigError::new(&path, format!("{l} listed twice")));
            }
        }

        finite("grid.center", &self.grid.center)?;
        positive("grid.side", self.grid.side)?;
        positive("grid.cell", self.grid.cell)?;
        if self.grid.cell > self.grid.side {
            return Err(ConfigError::new("grid.cell", "must not exceed grid.side"));
        }
        if self.forward.model == ForwardModel::Mie && self.forward.mie_extra_terms == 0 {
            return Err(ConfigError::new("forward.mie_extra_terms", "must be at least 1"));
        }
        if self.noise.snr_db.is_nan() {
            return Err(ConfigError::new("noise.snr_db", "must be a number"));
        }
        Ok(())
    }

    /// Fresnel geometry with config overrides; the standard layout otherwise.
    pub fn fresnel_geometry(&self) -> dsmap_core::FresnelGeometry {
        let mut g = dsmap_core::FresnelGeometry::default();
        if let Some(f) = &self.scene.fresnel {
            if let Some(r) = f.source_radius {
                g.source_radius = r;
            }
            if let Some(a) = &f.source_angles_deg {
                g.source_angles_deg = a.clone();
            }
            if let Some(r) = f.receiver_radius {
                g.receiver_radius = r;
            }
            if let Some(a) = &f.receiver_angles_deg {
                g.receiver_angles_deg = a.clone();
            }
        }
        g
    }
}

fn apply_override(table: &mut toml::Table, item: &str) -> Result<(), ConfigError> {
    let (key, raw) = item.split_once('=').ok_or_else(|| ConfigError::new(item, "override must look like key=value"))?;
    let key = key.trim();
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(ConfigError::new(key, "empty key segment"));
    }
    let value = match format!("v = {}", raw.trim()).parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| toml::Value::String(raw.trim().into())),
        Err(_) => toml::Value::String(raw.trim().into()),
    };
    let mut node = table;
    for (i, part) in parts[..parts.len() - 1].iter().enumerate() {
        let entry = node.entry(part.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        node = entry.as_table_mut().ok_or_else(|| ConfigError::new(parts[..=i].join("."), "is not a table"))?;
    }
    node.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}
