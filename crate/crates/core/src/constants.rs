//! Physical constants (CODATA 2018, SI) and positronium-specific scales.
//!
//! Everything inside the crate is SI. Conversions to eV, nm, ns, µJ/cm² and
//! friends happen only at I/O boundaries through the helpers at the bottom of
//! this module.

use crate::error::{Error, Result};

/// Speed of light in vacuum (m/s).
pub const C: f64 = 299_792_458.0;
/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Elementary charge (C).
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// Bohr radius (m).
pub const A0: f64 = 5.291_772_109_03e-11;
/// Vacuum permittivity (F/m).
pub const EPS0: f64 = 8.854_187_812_8e-12;
/// Boltzmann constant (J/K).
pub const KB: f64 = 1.380_649e-23;
/// Electron mass (kg).
pub const M_E: f64 = 9.109_383_701_5e-31;
/// Positronium mass, two electron masses (kg).
pub const M_PS: f64 = 2.0 * M_E;

/// One electron-volt in joules.
pub const EV: f64 = E_CHARGE;
/// Positronium Rydberg energy, 6.8 eV, kept as an exact literal.
pub const RY_PS: f64 = 6.8 * EV;
/// The 13.6 eV scale that appears in the level-splitting, sublevel-density and
/// band saturation-fluence formulas. Exact literal, not derived from α and mₑ.
pub const E_SCALE: f64 = 13.6 * EV;

/// Length scale of the positronium wavefunctions relative to hydrogen.
pub const PS_LENGTH_SCALE: f64 = 2.0;

/// Largest principal quantum number accepted anywhere in the crate. Keeps n⁵
/// style expressions far away from overflow.
pub const N_MAX: u32 = 200;

/// Validates a principal quantum number against `1..=N_MAX`.
pub fn check_n(n: u32) -> Result<u32> {
    if n == 0 || n > N_MAX {
        Err(Error::domain(format!(
            "principal quantum number {n} outside 1..={N_MAX}"
        )))
    } else {
        Ok(n)
    }
}

/// Unperturbed positronium level energy E_n = −13.6 eV / (2n²), in joules.
pub fn level_energy(n: u32) -> Result<f64> {
    let n = check_n(n)? as f64;
    Ok(-E_SCALE / (2.0 * n * n))
}

/// Vacuum wavelength (m) of the photon connecting `n_lo` to `n_hi`.
pub fn transition_wavelength(n_lo: u32, n_hi: u32) -> Result<f64> {
    if n_lo >= n_hi {
        return Err(Error::domain(format!(
            "transition requires n_lo < n_hi, got {n_lo} -> {n_hi}"
        )));
    }
    let de = level_energy(n_hi)? - level_energy(n_lo)?;
    Ok(energy_to_wavelength(de))
}

/// Angular frequency (rad/s) of the `n_lo -> n_hi` transition.
pub fn transition_angular_frequency(n_lo: u32, n_hi: u32) -> Result<f64> {
    Ok(2.0 * std::f64::consts::PI * C / transition_wavelength(n_lo, n_hi)?)
}

/// λ = 2πħc / E.
pub fn energy_to_wavelength(energy: f64) -> f64 {
    2.0 * std::f64::consts::PI * HBAR * C / energy
}

/// E = 2πħc / λ.
pub fn wavelength_to_energy(lambda: f64) -> f64 {
    2.0 * std::f64::consts::PI * HBAR * C / lambda
}

/// Linearised conversion of an energy width to a wavelength width at `lambda`:
/// Δλ ≈ ΔE·λ²/(2πħc).
pub fn energy_width_to_wavelength(de: f64, lambda: f64) -> f64 {
    de * lambda * lambda / (2.0 * std::f64::consts::PI * C * HBAR)
}

/// Unit helpers for the I/O boundary.
pub mod units {
    use super::EV;

    pub const NM: f64 = 1e-9;
    pub const NS: f64 = 1e-9;
    pub const MM: f64 = 1e-3;
    pub const UJ: f64 = 1e-6;
    /// 1 µJ/cm² in J/m².
    pub const UJ_PER_CM2: f64 = 1e-6 / 1e-4;
    /// 1 mJ/cm² in J/m².
    pub const MJ_PER_CM2: f64 = 1e-3 / 1e-4;

    pub fn to_ev(joules: f64) -> f64 {
        joules / EV
    }

    pub fn from_ev(ev: f64) -> f64 {
        ev * EV
    }
}
