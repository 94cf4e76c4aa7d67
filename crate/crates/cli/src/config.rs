//! TOML run configuration. Lengths are given in mm and frequencies in GHz.
//! The `*_run` methods validate a section, convert it to SI and resolve paths.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cryowire_core::flux::DEFAULT_GRID_STEP_HZ;
use cryowire_core::nrw::{DEFAULT_AGREEMENT_THRESHOLD, DEFAULT_MAX_BRANCH};
use cryowire_core::presets::{
    self, CHAIN_ATTENUATORS_DB, CHAIN_LENGTHS_MM, CHAIN_TEMPS_K, FILTER_BORE_DIAMETER,
    FILTER_LENGTH, FILTER_PIN_DIAMETER,
};
use cryowire_core::{Cable, CoaxGeometry, MaterialKind, MaterialSpectrum, ModeFamily, ModeId, Scenario};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    Modes,
    Flux,
    Nrw,
    Filter,
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pipeline::Modes => "modes",
            Pipeline::Flux => "flux",
            Pipeline::Nrw => "nrw",
            Pipeline::Filter => "filter",
        })
    }
}

/// Which mode families the `modes` pipeline reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilySelect {
    Tem,
    Te,
    Tm,
    All,
}

impl FamilySelect {
    pub fn families(self) -> Vec<ModeFamily> {
        match self {
            FamilySelect::Tem => vec![ModeFamily::Tem],
            FamilySelect::Te => vec![ModeFamily::Te],
            FamilySelect::Tm => vec![ModeFamily::Tm],
            FamilySelect::All => vec![ModeFamily::Tem, ModeFamily::Te, ModeFamily::Tm],
        }
    }
}

impl FromStr for FamilySelect {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "tem" => Ok(FamilySelect::Tem),
            "te" => Ok(FamilySelect::Te),
            "tm" => Ok(FamilySelect::Tm),
            "all" => Ok(FamilySelect::All),
            other => Err(format!("unknown mode family '{other}' (tem, te, tm, all)")),
        }
    }
}

/// Cable cross-section: a preset name, or explicit radii and materials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CableConfig {
    pub preset: Option<String>,
    pub inner_radius_mm: Option<f64>,
    pub outer_radius_mm: Option<f64>,
    pub dielectric_eps: Option<f64>,
    pub dielectric_tan_delta: Option<f64>,
    pub conductor_sigma: Option<f64>,
}

impl Default for CableConfig {
    fn default() -> Self {
        Self {
            preset: Some("ut086".into()),
            inner_radius_mm: None,
            outer_radius_mm: None,
            dielectric_eps: None,
            dielectric_tan_delta: None,
            conductor_sigma: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModesConfig {
    pub family: FamilySelect,
    pub max_f_ghz: f64,
    /// Start of the attenuation sweep.
    pub min_f_ghz: f64,
    pub grid_step_ghz: f64,
}

impl Default for ModesConfig {
    fn default() -> Self {
        Self {
            family: FamilySelect::All,
            max_f_ghz: 600.0,
            min_f_ghz: 82.0,
            grid_step_ghz: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FluxConfig {
    pub band_ghz: [f64; 2],
    pub scenarios: Vec<Scenario>,
    pub length_scale: f64,
    pub include_tm: bool,
    pub grid_step_ghz: f64,
}

impl Default for FluxConfig {
    fn default() -> Self {
        Self {
            band_ghz: [82.0, 110.0],
            scenarios: vec![Scenario::AttenuatorsActive, Scenario::AttenuatorsBypassed],
            length_scale: 1.0,
            include_tm: false,
            grid_step_ghz: DEFAULT_GRID_STEP_HZ * 1e-9,
        }
    }
}

/// One thermal stage. The first stage has no length; every later stage
/// carries the cable arriving from the previous stage and the attenuator
/// mounted on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageConfig {
    pub temperature_k: f64,
    pub length_mm: Option<f64>,
    #[serde(default)]
    pub attenuator_db: f64,
}

pub fn default_stages() -> Vec<StageConfig> {
    let mut out = vec![StageConfig {
        temperature_k: CHAIN_TEMPS_K[0],
        length_mm: None,
        attenuator_db: 0.0,
    }];
    for i in 0..CHAIN_LENGTHS_MM.len() {
        out.push(StageConfig {
            temperature_k: CHAIN_TEMPS_K[i + 1],
            length_mm: Some(CHAIN_LENGTHS_MM[i]),
            attenuator_db: CHAIN_ATTENUATORS_DB[i],
        });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionConfig {
    pub path: PathBuf,
    pub thickness_mm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NrwConfig {
    pub waveguide_a_mm: f64,
    pub waveguide_b_mm: f64,
    pub max_branch: u32,
    pub threshold: f64,
    pub material_name: String,
    #[serde(rename = "section")]
    pub sections: Vec<SectionConfig>,
}

impl Default for NrwConfig {
    fn default() -> Self {
        Self {
            waveguide_a_mm: 2.54,
            waveguide_b_mm: 1.27,
            max_branch: DEFAULT_MAX_BRANCH,
            threshold: DEFAULT_AGREEMENT_THRESHOLD,
            material_name: "absorber".into(),
            sections: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FilterConfig {
    /// `synthetic` or a CSV table `f_hz,eps_p,eps_pp,mu_p,mu_pp`.
    pub fill: String,
    pub conductor_sigma: f64,
    pub d_pin_mm: f64,
    pub bore_mm: f64,
    pub optimize: bool,
    pub length_mm: f64,
    pub band_ghz: [f64; 2],
    pub grid_step_ghz: f64,
    pub modes: Vec<String>,
    pub measured_s21: Option<PathBuf>,
    /// Propagate the [cable]/[[stage]]/[flux] chain through the filter.
    pub residual: bool,
    /// Filter stage temperature; defaults to the coldest stage.
    pub t_filter_k: Option<f64>,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            fill: "synthetic".into(),
            conductor_sigma: presets::COPPER_SIGMA,
            d_pin_mm: FILTER_PIN_DIAMETER * 1e3,
            bore_mm: FILTER_BORE_DIAMETER * 1e3,
            optimize: false,
            length_mm: FILTER_LENGTH * 1e3,
            band_ghz: [75.0, 110.0],
            grid_step_ghz: 0.5,
            modes: vec!["TEM".into(), "TE11".into()],
            measured_s21: None,
            residual: true,
            t_filter_k: None,
        }
    }
}

/// Contents of a config file; every section is optional.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub pipeline: Option<Pipeline>,
    pub cable: CableConfig,
    pub modes: ModesConfig,
    pub flux: FluxConfig,
    #[serde(rename = "stage")]
    pub stages: Vec<StageConfig>,
    pub nrw: NrwConfig,
    pub filter: FilterConfig,
    /// Output directory; relative to the config file like every other path.
    pub out_dir: Option<PathBuf>,
    /// Directory that relative paths are resolved against; not read from the file.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn band_hz(name: &str, band: [f64; 2]) -> Result<(f64, f64), CliError> {
    let (lo, hi) = (band[0] * 1e9, band[1] * 1e9);
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(config_err(format!(
            "{name}: band must satisfy 0 < f1 < f2 GHz, got [{}, {}]",
            band[0], band[1]
        )));
    }
    Ok((lo, hi))
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(config_err(format!("{name} must be positive, got {v}")))
    }
}

fn existing(base: &Path, p: &Path) -> Result<PathBuf, CliError> {
    let full = if p.is_absolute() { p.to_path_buf() } else { base.join(p) };
    if !full.is_file() {
        return Err(config_err(format!("file not found: {}", full.display())));
    }
    Ok(full)
}

/// Validated inputs of the `modes` pipeline in SI units.
#[derive(Debug, Clone)]
pub struct ModesRun {
    pub cable_label: String,
    pub geometry: CoaxGeometry,
    pub families: Vec<ModeFamily>,
    pub max_f_hz: f64,
    pub min_f_hz: f64,
    pub grid_step_hz: f64,
}

#[derive(Debug, Clone)]
pub struct FluxRun {
    pub cable_label: String,
    pub geometry: CoaxGeometry,
    pub temps_k: Vec<f64>,
    pub lengths_m: Vec<f64>,
    pub attenuators_db: Vec<f64>,
    pub band_hz: (f64, f64),
    pub scenarios: Vec<Scenario>,
    pub include_tm: bool,
    pub grid_step_hz: f64,
}

#[derive(Debug, Clone)]
pub struct NrwRun {
    pub a_wg: f64,
    pub b_wg: f64,
    pub max_branch: u32,
    pub threshold: f64,
    pub material_name: String,
    /// `(path, thickness [m])`.
    pub sections: Vec<(PathBuf, f64)>,
}

#[derive(Debug, Clone)]
pub struct FilterRun {
    pub fill: MaterialSpectrum,
    pub fill_path: Option<PathBuf>,
    pub conductor_sigma: f64,
    pub d_pin: f64,
    pub d_bore: f64,
    pub optimize: bool,
    pub length: f64,
    pub band_hz: (f64, f64),
    pub grid_step_hz: f64,
    pub modes: Vec<ModeId>,
    pub measured_s21: Option<PathBuf>,
    /// Upstream chain for the residual flux, if requested.
    pub residual: Option<(FluxRun, f64)>,
}

impl RunConfig {
    pub fn from_toml_str(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self, CliError> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| config_err(e.to_string()))?;
        cfg.base_dir = base_dir.into();
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let base = path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_default();
        Self::from_toml_str(&text, base)
    }

    pub fn resolved_path(&self, p: &Path) -> Result<PathBuf, CliError> {
        existing(&self.base_dir, p)
    }

    pub fn output_dir(&self) -> Result<PathBuf, CliError> {
        let p = self
            .out_dir
            .as_deref()
            .ok_or_else(|| config_err("no output directory given"))?;
        Ok(if p.is_absolute() { p.to_path_buf() } else { self.base_dir.join(p) })
    }

    /// Path of an input as it should appear in the manifest.
    pub fn input_label(&self, p: &Path) -> String {
        p.strip_prefix(&self.base_dir).unwrap_or(p).display().to_string()
    }

    pub fn cable(&self) -> Result<(String, CoaxGeometry), CliError> {
        let c = &self.cable;
        let custom = c.inner_radius_mm.is_some() || c.outer_radius_mm.is_some();
        let (label, base) = match (&c.preset, custom) {
            (Some(_), true) => {
                return Err(config_err("[cable]: give either a preset or explicit radii, not both"))
            }
            (Some(p), false) => {
                let cable: Cable = p.parse().map_err(|e: cryowire_core::Error| config_err(e.to_string()))?;
                (cable.id().to_string(), cable.geometry())
            }
            (None, _) => {
                let a = positive("inner_radius_mm", c.inner_radius_mm.unwrap_or(f64::NAN))? * 1e-3;
                let b = positive("outer_radius_mm", c.outer_radius_mm.unwrap_or(f64::NAN))? * 1e-3;
                let geom = CoaxGeometry::new(a, b, presets::stainless_steel(), presets::ptfe())
                    .map_err(|e| config_err(format!("[cable]: {e}")))?;
                ("custom".to_string(), geom)
            }
        };
        let mut geom = base;
        if c.dielectric_eps.is_some() || c.dielectric_tan_delta.is_some() {
            let eps = c.dielectric_eps.unwrap_or(presets::PTFE_EPS);
            let tan = c.dielectric_tan_delta.unwrap_or(presets::PTFE_TAN_DELTA);
            geom.dielectric =
                MaterialSpectrum::constant("dielectric", MaterialKind::Dielectric, eps, tan, 1.0, 0.0)
                    .map_err(|e| config_err(format!("[cable]: {e}")))?;
        }
        if let Some(sigma) = c.conductor_sigma {
            geom.conductor = MaterialSpectrum::conductor("conductor", positive("conductor_sigma", sigma)?)
                .map_err(|e| config_err(format!("[cable]: {e}")))?;
        }
        Ok((label, geom))
    }

    pub fn modes_run(&self) -> Result<ModesRun, CliError> {
        let (cable_label, geometry) = self.cable()?;
        let m = &self.modes;
        let max_f_hz = positive("modes.max_f_ghz", m.max_f_ghz)? * 1e9;
        let min_f_hz = positive("modes.min_f_ghz", m.min_f_ghz)? * 1e9;
        if min_f_hz >= max_f_hz {
            return Err(config_err(format!(
                "modes: min_f_ghz {} must be below max_f_ghz {}",
                m.min_f_ghz, m.max_f_ghz
            )));
        }
        Ok(ModesRun {
            cable_label,
            geometry,
            families: m.family.families(),
            max_f_hz,
            min_f_hz,
            grid_step_hz: positive("modes.grid_step_ghz", m.grid_step_ghz)? * 1e9,
        })
    }

    pub fn flux_run(&self) -> Result<FluxRun, CliError> {
        let (cable_label, geometry) = self.cable()?;
        let f = &self.flux;
        let stages = if self.stages.is_empty() {
            default_stages()
        } else {
            self.stages.clone()
        };
        if stages.len() < 2 {
            return Err(config_err("need at least two [[stage]] entries"));
        }
        if stages[0].length_mm.is_some() || stages[0].attenuator_db != 0.0 {
            return Err(config_err("the first [[stage]] is the warm end and takes no length or attenuator"));
        }
        let scale = positive("flux.length_scale", f.length_scale)?;
        let mut lengths_m = Vec::new();
        let mut attenuators_db = Vec::new();
        for (i, s) in stages.iter().enumerate().skip(1) {
            let l = s
                .length_mm
                .ok_or_else(|| config_err(format!("[[stage]] {} needs length_mm", i + 1)))?;
            lengths_m.push(positive("stage length_mm", l)? * 1e-3 * scale);
            if !(s.attenuator_db >= 0.0 && s.attenuator_db.is_finite()) {
                return Err(config_err(format!("[[stage]] {}: attenuator_db must be >= 0", i + 1)));
            }
            attenuators_db.push(s.attenuator_db);
        }
        if f.scenarios.is_empty() {
            return Err(config_err("flux.scenarios is empty"));
        }
        Ok(FluxRun {
            cable_label,
            geometry,
            temps_k: stages.iter().map(|s| s.temperature_k).collect(),
            lengths_m,
            attenuators_db,
            band_hz: band_hz("flux.band_ghz", f.band_ghz)?,
            scenarios: f.scenarios.clone(),
            include_tm: f.include_tm,
            grid_step_hz: positive("flux.grid_step_ghz", f.grid_step_ghz)? * 1e9,
        })
    }

    pub fn nrw_run(&self) -> Result<NrwRun, CliError> {
        let n = &self.nrw;
        if n.sections.len() < 2 {
            return Err(config_err("nrw needs at least two [[nrw.section]] entries"));
        }
        let sections = n
            .sections
            .iter()
            .map(|s| Ok((existing(&self.base_dir, &s.path)?, positive("thickness_mm", s.thickness_mm)? * 1e-3)))
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(NrwRun {
            a_wg: positive("nrw.waveguide_a_mm", n.waveguide_a_mm)? * 1e-3,
            b_wg: positive("nrw.waveguide_b_mm", n.waveguide_b_mm)? * 1e-3,
            max_branch: n.max_branch,
            threshold: positive("nrw.threshold", n.threshold)?,
            material_name: n.material_name.clone(),
            sections,
        })
    }

    pub fn filter_run(&self) -> Result<FilterRun, CliError> {
        let c = &self.filter;
        let (fill, fill_path) = if c.fill.eq_ignore_ascii_case("synthetic") {
            (presets::synthetic_absorber(), None)
        } else {
            let p = existing(&self.base_dir, Path::new(&c.fill))?;
            let m = MaterialSpectrum::from_csv_path(&p, MaterialKind::Absorber)
                .map_err(|e| config_err(format!("filter.fill {}: {e}", p.display())))?;
            (m, Some(p))
        };
        let modes = c
            .modes
            .iter()
            .map(|s| s.parse::<ModeId>().map_err(|e| config_err(format!("filter.modes: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if modes.is_empty() {
            return Err(config_err("filter.modes is empty"));
        }
        let residual = if c.residual {
            let chain = self.flux_run()?;
            let t = match c.t_filter_k {
                Some(t) => positive("filter.t_filter_k", t)?,
                None => *chain.temps_k.last().unwrap(),
            };
            Some((chain, t))
        } else {
            None
        };
        Ok(FilterRun {
            fill,
            fill_path,
            conductor_sigma: positive("filter.conductor_sigma", c.conductor_sigma)?,
            d_pin: positive("filter.d_pin_mm", c.d_pin_mm)? * 1e-3,
            d_bore: positive("filter.bore_mm", c.bore_mm)? * 1e-3,
            optimize: c.optimize,
            length: positive("filter.length_mm", c.length_mm)? * 1e-3,
            band_hz: band_hz("filter.band_ghz", c.band_ghz)?,
            grid_step_hz: positive("filter.grid_step_ghz", c.grid_step_ghz)? * 1e9,
            modes,
            measured_s21: c
                .measured_s21
                .as_deref()
                .map(|p| existing(&self.base_dir, p))
                .transpose()?,
            residual,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_uses_defaults() {
        let cfg = RunConfig::from_toml_str("", ".").unwrap();
        let run = cfg.flux_run().unwrap();
        assert_eq!(run.temps_k, CHAIN_TEMPS_K.to_vec());
        assert_eq!(run.attenuators_db, CHAIN_ATTENUATORS_DB.to_vec());
        assert!((run.lengths_m[0] - 0.228).abs() < 1e-15);
        assert_eq!(run.band_hz, (82e9, 110e9));
    }

    #[test]
    fn rejects_bad_band_and_unknown_keys() {
        let cfg = RunConfig::from_toml_str("[flux]\nband_ghz = [110, 82]\n", ".").unwrap();
        assert!(matches!(cfg.flux_run(), Err(CliError::Config(_))));
        let cfg = RunConfig::from_toml_str("[flux]\nband_ghz = [90, 90]\n", ".").unwrap();
        assert!(matches!(cfg.flux_run(), Err(CliError::Config(_))));
        assert!(RunConfig::from_toml_str("[flux]\nbnad_ghz = [1, 2]\n", ".").is_err());
    }

    #[test]
    fn stage_list() {
        let text = r#"
[[stage]]
temperature_k = 300
[[stage]]
temperature_k = 4
length_mm = 500
attenuator_db = 10
"#;
        let run = RunConfig::from_toml_str(text, ".").unwrap().flux_run().unwrap();
        assert_eq!(run.temps_k, vec![300.0, 4.0]);
        assert_eq!(run.lengths_m, vec![0.5]);
        assert_eq!(run.attenuators_db, vec![10.0]);
        let bad = "[[stage]]\ntemperature_k = 300\nlength_mm = 1\n[[stage]]\ntemperature_k = 4\nlength_mm = 1\n";
        assert!(RunConfig::from_toml_str(bad, ".").unwrap().flux_run().is_err());
    }

    #[test]
    fn custom_cable() {
        let text = "[cable]\ninner_radius_mm = 0.255\nouter_radius_mm = 0.835\n";
        let (label, g) = RunConfig::from_toml_str(text, ".").unwrap().cable().unwrap();
        assert_eq!(label, "custom");
        assert_eq!(g, Cable::Ut086.geometry());
        let lossy = "[cable]\npreset = \"ut086\"\ndielectric_eps = 2.1\ndielectric_tan_delta = 1e-3\n";
        let (_, g) = RunConfig::from_toml_str(lossy, ".").unwrap().cable().unwrap();
        let m = g.dielectric.interpolate(1e9).unwrap();
        assert!((m.tan_delta() - 1e-3).abs() < 1e-15 && (m.eps_p() - 2.1).abs() < 1e-15);
        let both = "[cable]\npreset = \"ut047\"\ninner_radius_mm = 0.1\n";
        assert!(RunConfig::from_toml_str(both, ".").unwrap().cable().is_err());
    }

    #[test]
    fn missing_files_are_config_errors() {
        let text = "[nrw]\n[[nrw.section]]\npath = \"nope.s2p\"\nthickness_mm = 2\n[[nrw.section]]\npath = \"nope2.s2p\"\nthickness_mm = 3\n";
        let cfg = RunConfig::from_toml_str(text, "/nonexistent").unwrap();
        assert!(matches!(cfg.nrw_run(), Err(CliError::Config(_))));
    }
}
