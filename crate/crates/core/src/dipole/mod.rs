//! Electric-dipole matrix elements, Einstein B coefficients and absorption
//! cross sections for positronium.
//!
//! Positronium wavefunctions are hydrogen wavefunctions stretched by a factor
//! two (ground-state radius 2a0), so every length matrix element is twice the
//! hydrogen one. Spin is ignored throughout.

mod angular;
mod gordon;

use std::f64::consts::PI;

use serde::Serialize;

pub use angular::{angular_factor, Polarization};
pub use gordon::hydrogen_radial;

use crate::constants::{self, A0, C, E_CHARGE, EPS0, HBAR, PS_LENGTH_SCALE};
use crate::error::{Error, Result};
use crate::level_structure::{self, Environment};

/// Orbital state |n l m⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct StateLabel {
    pub n: u32,
    pub l: u32,
    pub m: i32,
}

impl StateLabel {
    pub fn new(n: u32, l: u32, m: i32) -> Result<Self> {
        constants::check_n(n)?;
        if l >= n || m.unsigned_abs() > l {
            return Err(Error::domain(format!("invalid state (n,l,m) = ({n},{l},{m})")));
        }
        Ok(StateLabel { n, l, m })
    }
}

impl std::fmt::Display for StateLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.n, self.l, self.m)
    }
}

/// Positronium radial integral ⟨n1 l1| r |n2 l2⟩ in metres.
pub fn radial_matrix_element(n1: u32, l1: u32, n2: u32, l2: u32) -> Result<f64> {
    constants::check_n(n1)?;
    constants::check_n(n2)?;
    Ok(PS_LENGTH_SCALE * A0 * hydrogen_radial(n1, l1, n2, l2)?)
}

/// |⟨lower| e z |upper⟩| in C·m.
pub fn dipole_moment(lower: StateLabel, upper: StateLabel, pol: Polarization) -> Result<f64> {
    let ang = angular_factor(lower.l, lower.m, upper.l, upper.m, pol)?;
    let radial = radial_matrix_element(lower.n, lower.l, upper.n, upper.l)?;
    Ok(E_CHARGE * radial.abs() * ang.sqrt())
}

/// B = π·|d|²/(ε0·ħ²).
pub fn einstein_b_from_dipole(d: f64) -> f64 {
    PI * d * d / (EPS0 * HBAR * HBAR)
}

/// Absorption Einstein coefficient of `lower -> upper`.
pub fn einstein_b(lower: StateLabel, upper: StateLabel, pol: Polarization) -> Result<f64> {
    Ok(einstein_b_from_dipole(dipole_moment(lower, upper, pol)?))
}

/// (3,1,0): the intermediate state reached by the first leg.
pub const N3_P0: StateLabel = StateLabel { n: 3, l: 1, m: 0 };

/// Band coefficient B_S = B(lower → (n, lower.l+1, lower.m)) / n² for one
/// sublevel of a fully mixed Rydberg fan.
pub fn band_b(n: u32, lower: StateLabel) -> Result<f64> {
    band_b_to(n, lower, lower.l + 1)
}

/// As [`band_b`] with an explicit orbital quantum number of the unperturbed
/// final state (e.g. `l = 0` for the weaker s channel).
pub fn band_b_to(n: u32, lower: StateLabel, final_l: u32) -> Result<f64> {
    if n <= lower.n {
        return Err(Error::domain(format!("band n={n} must lie above {lower}")));
    }
    let upper = StateLabel::new(n, final_l, lower.m)?;
    let nf = n as f64;
    Ok(einstein_b(lower, upper, Polarization::LinearZ)? / (nf * nf))
}

/// Gaussian line profile normalised to unit area in angular frequency.
pub fn gaussian_lineshape(delta: f64, fwhm: f64) -> f64 {
    let sigma = fwhm / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt());
    (-(delta * delta) / (2.0 * sigma * sigma)).exp() / (sigma * (2.0 * PI).sqrt())
}

/// Doppler profile g_D(ω − ω0) of the line at angular frequency `omega0`.
pub fn doppler_lineshape(env: &Environment, omega0: f64, delta: f64) -> Result<f64> {
    let lambda0 = 2.0 * PI * C / omega0;
    let fwhm = level_structure::doppler_fwhm(env, lambda0)?.domega();
    if fwhm == 0.0 {
        return Err(Error::domain("Doppler profile undefined at T = 0"));
    }
    Ok(gaussian_lineshape(delta, fwhm))
}

/// σ(ω) = (ħω/c)·g_D(ω − ω0)·B for a Doppler-broadened bound-bound line.
pub fn line_cross_section(
    lower: StateLabel,
    upper: StateLabel,
    omega: f64,
    env: &Environment,
) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::domain(format!("angular frequency {omega}")));
    }
    let b = einstein_b(lower, upper, Polarization::LinearZ)?;
    let omega0 = constants::transition_angular_frequency(lower.n, upper.n)?;
    Ok(HBAR * omega / C * doppler_lineshape(env, omega0, omega - omega0)? * b)
}

/// σ₁₃(ω) for (1,0,0) → (3,1,0).
pub fn cross_section_13(omega: f64, env: &Environment) -> Result<f64> {
    line_cross_section(StateLabel { n: 1, l: 0, m: 0 }, N3_P0, omega, env)
}

/// σ₃ₙ(ω) = (ħω/c)·ρ·B_S from (3,1,0) into the Stark band of `n`. Zero outside
/// the fan, i.e. when |ħω − ħω₃ₙ| exceeds half the Stark width.
pub fn cross_section_3n(omega: f64, env: &Environment, n: u32) -> Result<f64> {
    band_cross_section(N3_P0, n, omega, env)
}

pub fn band_cross_section(lower: StateLabel, n: u32, omega: f64, env: &Environment) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::domain(format!("angular frequency {omega}")));
    }
    let omega0 = constants::transition_angular_frequency(lower.n, n)?;
    let half_width = 0.5 * level_structure::stark_width(env, n)? / HBAR;
    if (omega - omega0).abs() > half_width {
        return Ok(0.0);
    }
    let rho = level_structure::sublevel_density(n)?;
    Ok(HBAR * omega / C * rho * band_b(n, lower)?)
}

/// A fully characterised transition.
#[derive(Debug, Clone, Serialize)]
pub struct TransitionSpec {
    pub lower: StateLabel,
    pub upper: StateLabel,
    pub polarization: Polarization,
    /// C·m, non-negative by phase convention.
    pub dipole_moment: f64,
    /// Einstein B of the unperturbed line (for bands: of the dipole-allowed
    /// state the band is built on).
    pub einstein_b: f64,
    /// Peak absorption cross section (m²).
    pub cross_section_peak: f64,
    /// Whether the upper level is a Stark-mixed band.
    pub band: bool,
}

impl TransitionSpec {
    /// Doppler-broadened bound-bound line.
    pub fn line(lower: StateLabel, upper: StateLabel, env: &Environment) -> Result<Self> {
        let pol = Polarization::LinearZ;
        let d = dipole_moment(lower, upper, pol)?;
        let omega0 = constants::transition_angular_frequency(lower.n, upper.n)?;
        Ok(TransitionSpec {
            lower,
            upper,
            polarization: pol,
            dipole_moment: d,
            einstein_b: einstein_b_from_dipole(d),
            cross_section_peak: line_cross_section(lower, upper, omega0, env)?,
            band: false,
        })
    }

    /// Transition into the Stark band of `n`, built on the state
    /// (n, `final_l`, lower.m).
    pub fn band(lower: StateLabel, n: u32, final_l: u32, env: &Environment) -> Result<Self> {
        let pol = Polarization::LinearZ;
        let upper = StateLabel::new(n, final_l, lower.m)?;
        let d = dipole_moment(lower, upper, pol)?;
        let omega0 = constants::transition_angular_frequency(lower.n, n)?;
        let rho = level_structure::sublevel_density(n)?;
        let nf = n as f64;
        let b = einstein_b_from_dipole(d);
        if level_structure::stark_width(env, n)? == 0.0 {
            log::warn!("band transition to n={n} with zero Stark width");
        }
        Ok(TransitionSpec {
            lower,
            upper,
            polarization: pol,
            dipole_moment: d,
            einstein_b: b,
            cross_section_peak: HBAR * omega0 / C * rho * b / (nf * nf),
            band: true,
        })
    }
}
