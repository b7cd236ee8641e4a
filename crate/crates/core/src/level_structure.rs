//! Doppler and motional-Stark broadenings, level spacing, fan interleaving and
//! Stark ionization for positronium moving across a magnetic field.
//!
//! The Rydberg fans are treated as `n²` sublevels spread uniformly over the
//! motional Stark width; no sublevel-resolved energies are computed.

use serde::{Deserialize, Serialize};

use crate::constants::{
    self, check_n, units, A0, C, E_CHARGE, E_SCALE, EPS0, EV, HBAR, KB, M_PS,
};
use crate::error::{Error, Result};

/// Linear Zeeman (ortho/para mixing) energy per tesla.
const ZEEMAN_PER_TESLA: f64 = 1.2e-4 * EV;

/// Lowest n considered "useful" for charge exchange, regardless of where
/// interleaving sets in.
pub const USEFUL_N_FLOOR: u32 = 20;

/// Temperature and magnetic field of the positronium cloud. The field points
/// along z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    /// Kelvin.
    pub temperature: f64,
    /// Tesla.
    pub b_field: f64,
}

impl Environment {
    pub fn new(temperature: f64, b_field: f64) -> Result<Self> {
        let env = Environment { temperature, b_field };
        env.validate()?;
        Ok(env)
    }

    /// 100 K, 1 T.
    pub fn reference() -> Self {
        Environment { temperature: 100.0, b_field: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(Error::domain(format!("temperature {} K", self.temperature)));
        }
        if !(self.b_field.is_finite() && self.b_field >= 0.0) {
            return Err(Error::domain(format!("magnetic field {} T", self.b_field)));
        }
        Ok(())
    }

    /// One-dimensional thermal speed sqrt(kB·T/m) of positronium.
    pub fn thermal_velocity(&self) -> f64 {
        (KB * self.temperature / M_PS).sqrt()
    }

    /// Motional electric field |v × B| for the thermal transverse speed (V/m).
    pub fn motional_field(&self) -> f64 {
        self.thermal_velocity() * self.b_field
    }
}

impl Default for Environment {
    fn default() -> Self {
        Environment::reference()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerWidth {
    /// Wavelength FWHM (m).
    pub dlambda: f64,
    /// Photon-energy FWHM (J).
    pub denergy: f64,
}

impl DopplerWidth {
    /// Angular-frequency FWHM (rad/s).
    pub fn domega(&self) -> f64 {
        self.denergy / HBAR
    }
}

/// Gaussian Doppler FWHM of a line at `lambda0` for the Ps mass.
pub fn doppler_fwhm(env: &Environment, lambda0: f64) -> Result<DopplerWidth> {
    if !(lambda0 > 0.0) {
        return Err(Error::domain(format!("wavelength {lambda0} m")));
    }
    let rel = (8.0 * std::f64::consts::LN_2 * KB * env.temperature / (M_PS * C * C)).sqrt();
    let dlambda = lambda0 * rel;
    let denergy = constants::wavelength_to_energy(lambda0) * rel;
    Ok(DopplerWidth { dlambda, denergy })
}

/// Full energy width of the motional Stark fan of level `n`:
/// ΔE_S = 6·e·a0·n(n−1)·B·sqrt(kB·T/m).
pub fn stark_width(env: &Environment, n: u32) -> Result<f64> {
    let n = check_n(n)? as f64;
    Ok(6.0 * E_CHARGE * A0 * n * (n - 1.0) * env.motional_field())
}

/// Spacing ΔE_n ≈ 13.6 eV/n³ between adjacent unperturbed levels.
pub fn level_splitting(n: u32) -> Result<f64> {
    let n = check_n(n)?;
    if n < 2 {
        return Err(Error::domain("level splitting needs n >= 2"));
    }
    let n = n as f64;
    Ok(E_SCALE / (n * n * n))
}

/// Number N_n = ΔE_S/ΔE_n of unperturbed levels swallowed by the fan of `n`.
pub fn interleaving_count(env: &Environment, n: u32) -> Result<f64> {
    Ok(stark_width(env, n)? / level_splitting(n)?)
}

/// Sublevel density per unit angular frequency, ρ = n⁵·ħ/13.6 eV (s).
///
/// Only meaningful once the fans interleave (N_n ≳ 1); see
/// [`sublevel_density_checked`].
pub fn sublevel_density(n: u32) -> Result<f64> {
    let n = check_n(n)?;
    if n < 2 {
        return Err(Error::domain("sublevel density needs n >= 2"));
    }
    let nf = n as f64;
    Ok(nf.powi(5) * HBAR / E_SCALE)
}

/// Same as [`sublevel_density`] but warns when `env` puts level `n` outside
/// the interleaved regime where the formula holds.
pub fn sublevel_density_checked(env: &Environment, n: u32) -> Result<f64> {
    let rho = sublevel_density(n)?;
    let count = interleaving_count(env, n)?;
    if count < 1.0 {
        log::warn!("sublevel density used for n={n} with N_n={count:.3} < 1 (fans not interleaved)");
    }
    Ok(rho)
}

/// Electric field (V/m) above which the red state of the `n` fan ionizes:
/// e/(16π·ε0·a0²) · 1/(9n⁴).
pub fn ionization_threshold_field(n: u32) -> Result<f64> {
    let n = check_n(n)? as f64;
    Ok(E_CHARGE / (16.0 * std::f64::consts::PI * EPS0 * A0 * A0) / (9.0 * n.powi(4)))
}

/// True when the thermal motional field exceeds the red-state threshold.
pub fn is_ionizing(env: &Environment, n: u32) -> Result<bool> {
    Ok(env.motional_field() > ionization_threshold_field(n)?)
}

/// First-order Zeeman mixing energy, linear in B.
pub fn zeeman_scale(env: &Environment) -> f64 {
    ZEEMAN_PER_TESLA * env.b_field
}

/// One row of the level-structure table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelBand {
    pub n: u32,
    /// J.
    pub energy: f64,
    /// ΔE_S (J).
    pub stark_width: f64,
    /// ΔE_n (J).
    pub splitting: f64,
    /// N_n.
    pub n_interleaved: f64,
    /// ρ (s).
    pub density: f64,
    pub ionizing: bool,
    /// λ of the 3 → n transition (m).
    pub lambda_3n: f64,
    /// Doppler FWHM of the 3 → n line (m).
    pub dlambda_doppler: f64,
    /// Stark fan width expressed as a wavelength width on the 3 → n line (m).
    pub dlambda_stark: f64,
    /// Adjacent-level spacing expressed as a wavelength width (m).
    pub dlambda_splitting: f64,
}

impl LevelBand {
    pub fn compute(env: &Environment, n: u32) -> Result<Self> {
        if n < 4 {
            return Err(Error::domain(format!("structure rows need n >= 4 (3 -> n), got {n}")));
        }
        let lambda_3n = constants::transition_wavelength(3, n)?;
        let stark = stark_width(env, n)?;
        let split = level_splitting(n)?;
        Ok(LevelBand {
            n,
            energy: constants::level_energy(n)?,
            stark_width: stark,
            splitting: split,
            n_interleaved: stark / split,
            density: sublevel_density(n)?,
            ionizing: is_ionizing(env, n)?,
            lambda_3n,
            dlambda_doppler: doppler_fwhm(env, lambda_3n)?.dlambda,
            dlambda_stark: constants::energy_width_to_wavelength(stark, lambda_3n),
            dlambda_splitting: constants::energy_width_to_wavelength(split, lambda_3n),
        })
    }

    pub const CSV_HEADER: &'static str =
        "n,E_n[eV],dlambda_doppler[nm],dlambda_stark[nm],dlambda_splitting[nm],N_n,rho[s],ionizing";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{}",
            self.n,
            units::to_ev(self.energy),
            self.dlambda_doppler / units::NM,
            self.dlambda_stark / units::NM,
            self.dlambda_splitting / units::NM,
            self.n_interleaved,
            self.density,
            self.ionizing
        )
    }
}

/// Default n range of the structure table.
pub const DEFAULT_N_RANGE: (u32, u32) = (10, 35);

/// Rows for every n in `lo..=hi`.
pub fn structure_table(env: &Environment, lo: u32, hi: u32) -> Result<Vec<LevelBand>> {
    env.validate()?;
    if lo < 4 || hi > constants::N_MAX || lo > hi {
        return Err(Error::domain(format!(
            "n range {lo}..={hi} must lie within 4..={}",
            constants::N_MAX
        )));
    }
    (lo..=hi).map(|n| LevelBand::compute(env, n)).collect()
}

/// Characteristic n values read off the structure curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StructureMarkers {
    /// Highest n whose Stark fan is still narrower than the spacing to the
    /// next level (N_n < 1); fans interleave for every n above it.
    pub interleaving_onset: Option<u32>,
    /// Lowest n whose red state is Stark-ionized by the thermal motional field.
    pub ionization_onset: Option<u32>,
    /// `[max(20, interleaving_onset), ionization_onset]`, when both exist and
    /// the interval is non-empty.
    pub useful_range: Option<(u32, u32)>,
}

pub fn structure_markers(env: &Environment) -> Result<StructureMarkers> {
    env.validate()?;
    let mut interleaving_onset = None;
    let mut ever_interleaved = false;
    for n in 2..=constants::N_MAX {
        if interleaving_count(env, n)? < 1.0 {
            interleaving_onset = Some(n);
        } else {
            ever_interleaved = true;
            break;
        }
    }
    if !ever_interleaved {
        interleaving_onset = None;
    }
    let mut ionization_onset = None;
    for n in 2..=constants::N_MAX {
        if is_ionizing(env, n)? {
            ionization_onset = Some(n);
            break;
        }
    }
    let useful_range = match (interleaving_onset, ionization_onset) {
        (Some(lo), Some(hi)) => {
            let lo = lo.max(USEFUL_N_FLOOR);
            (lo <= hi).then_some((lo, hi))
        }
        _ => None,
    };
    Ok(StructureMarkers { interleaving_onset, ionization_onset, useful_range })
}
