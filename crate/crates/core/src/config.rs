//! Run configuration as read from JSON, in laboratory units (K, T, nm, ns,
//! µJ/cm², mm). Every block is optional; an empty document `{}` is the
//! 1→3→25 reference scenario at 100 K and 1 T.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bloch::{BeamGeometry, IonizationCrossSections, LadderConfig, Scheme};
use crate::constants::{self, units};
use crate::dipole::Polarization;
use crate::error::{Error, Result};
use crate::level_structure::{self, Environment};
use crate::saturation::{self, LaserPulse};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub environment: EnvironmentBlock,
    pub scheme: SchemeBlock,
    /// Reference pulses of the chosen ladder when absent.
    pub pulses: Option<[PulseBlock; 2]>,
    pub simulation: SimulationBlock,
    pub structure: StructureBlock,
    pub fluence: FluenceBlock,
    pub output: OutputBlock,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnvironmentBlock {
    pub temperature_k: f64,
    pub b_field_t: f64,
}

impl Default for EnvironmentBlock {
    fn default() -> Self {
        EnvironmentBlock { temperature_k: 100.0, b_field_t: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SchemeBlock {
    pub ladder: Scheme,
    pub n_final: u32,
    pub final_l: u32,
}

impl Default for SchemeBlock {
    fn default() -> Self {
        SchemeBlock { ladder: Scheme::ViaN3, n_final: 25, final_l: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseBlock {
    /// Resonant with the unperturbed transition when absent.
    #[serde(default)]
    pub wavelength_nm: Option<f64>,
    pub dlambda_nm: f64,
    pub duration_ns: f64,
    pub fluence_uj_cm2: f64,
    pub t_center_ns: f64,
}

impl PulseBlock {
    fn from_pulse(p: &LaserPulse) -> Self {
        PulseBlock {
            wavelength_nm: None,
            dlambda_nm: p.dlambda / units::NM,
            duration_ns: p.duration / units::NS,
            fluence_uj_cm2: p.fluence / units::UJ_PER_CM2,
            t_center_ns: p.t_center / units::NS,
        }
    }

    fn to_pulse(self, resonant: f64) -> LaserPulse {
        LaserPulse {
            lambda0: self.wavelength_nm.map_or(resonant, |w| w * units::NM),
            dlambda: self.dlambda_nm * units::NM,
            duration: self.duration_ns * units::NS,
            fluence: self.fluence_uj_cm2 * units::UJ_PER_CM2,
            t_center: self.t_center_ns * units::NS,
            polarization: Polarization::LinearZ,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationBlock {
    pub seed: u64,
    pub realizations: usize,
    /// Tenth of the shortest coherence time when absent.
    pub dt_ns: Option<f64>,
    pub window_ns: Option<[f64; 2]>,
    pub record_interval_ns: Option<f64>,
    pub geometry: BeamGeometry,
    pub sample_velocity: bool,
    pub decay: bool,
    pub mid_lifetime_ns: Option<f64>,
    /// Calibrated defaults when absent.
    pub ionization_m2: Option<IonizationCrossSections>,
}

impl Default for SimulationBlock {
    fn default() -> Self {
        SimulationBlock {
            seed: 1,
            realizations: 300,
            dt_ns: None,
            window_ns: None,
            record_interval_ns: None,
            geometry: BeamGeometry::CoPropagating,
            sample_velocity: true,
            decay: true,
            mid_lifetime_ns: None,
            ionization_m2: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StructureBlock {
    pub n_min: u32,
    pub n_max: u32,
}

impl Default for StructureBlock {
    fn default() -> Self {
        let (n_min, n_max) = level_structure::DEFAULT_N_RANGE;
        StructureBlock { n_min, n_max }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FluenceBlock {
    pub spot_fwhm_mm: f64,
    pub overdrive: f64,
}

impl Default for FluenceBlock {
    fn default() -> Self {
        FluenceBlock {
            spot_fwhm_mm: saturation::DEFAULT_SPOT_FWHM / units::MM,
            overdrive: saturation::DEFAULT_OVERDRIVE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OutputBlock {
    pub format: Format,
    pub path: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config(format!("config: {e}")))
    }

    /// Reads a JSON config, or the `# config:` line of a previous output
    /// file so runs can be repeated from their own results.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        let trimmed = text.trim_start();
        if trimmed.starts_with('#') {
            let line = text
                .lines()
                .find_map(|l| l.strip_prefix(crate::output::CONFIG_PREFIX))
                .ok_or_else(|| Error::config(format!("{} has no config header", path.display())))?;
            return Self::from_json(line);
        }
        if trimmed.starts_with('{') {
            let v: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Error::config(format!("config: {e}")))?;
            // a JSON output document carries its config under "config"
            if v.get("schema_version").is_some() {
                let cfg = v.get("config").cloned().ok_or_else(|| Error::config("output document has no config"))?;
                return serde_json::from_value(cfg).map_err(|e| Error::config(format!("config: {e}")));
            }
        }
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn env(&self) -> Result<Environment> {
        Environment::new(self.environment.temperature_k, self.environment.b_field_t)
            .map_err(|e| Error::config(e.to_string()))
    }

    /// Pulses in effect, filling in the reference pulses of the ladder.
    pub fn pulse_blocks(&self) -> [PulseBlock; 2] {
        self.pulses.unwrap_or_else(|| {
            let r = reference_for(self.scheme.ladder);
            [PulseBlock::from_pulse(&r.pulses[0]), PulseBlock::from_pulse(&r.pulses[1])]
        })
    }

    /// SI simulator configuration.
    pub fn to_ladder(&self) -> Result<LadderConfig> {
        let env = self.env()?;
        let mid = self.scheme.ladder.mid_level().n;
        let n = self.scheme.n_final;
        if n <= mid {
            return Err(Error::config(format!("n_final={n} must exceed intermediate n={mid}")));
        }
        let lam1 = constants::transition_wavelength(1, mid)?;
        let lam2 = constants::transition_wavelength(mid, n).map_err(|e| Error::config(e.to_string()))?;
        let [p1, p2] = self.pulse_blocks();
        let s = &self.simulation;
        let c = LadderConfig {
            scheme: self.scheme.ladder,
            n_final: n,
            final_l: self.scheme.final_l,
            pulses: [p1.to_pulse(lam1), p2.to_pulse(lam2)],
            env,
            mid_lifetime: s.mid_lifetime_ns.map(|t| t * units::NS),
            decay: s.decay,
            ionization: s.ionization_m2,
            seed: s.seed,
            n_realizations: s.realizations,
            dt: s.dt_ns.map(|t| t * units::NS),
            window: s.window_ns.map(|[a, b]| [a * units::NS, b * units::NS]),
            record_interval: s.record_interval_ns.map(|t| t * units::NS),
            geometry: s.geometry,
            sample_velocity: s.sample_velocity,
        };
        c.validate()?;
        Ok(c)
    }
}

fn reference_for(scheme: Scheme) -> LadderConfig {
    match scheme {
        Scheme::ViaN3 => LadderConfig::reference_n3(),
        Scheme::ViaN2 => LadderConfig::reference_n2(),
    }
}
