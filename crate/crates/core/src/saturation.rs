//! Saturation fluences, pulse-energy budgets and the incoherent two-level rate
//! equation dP/dt = (1 − 2P)·W(t).

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::constants::{self, C, E_SCALE, HBAR};
use crate::dipole::{self, Polarization, StateLabel, N3_P0};
use crate::error::{Error, Result};
use crate::level_structure::{self, Environment};

/// FWHM → standard deviation for a Gaussian.
pub const FWHM_TO_SIGMA: f64 = 0.424_660_900_144_009_5; // 1/(2·sqrt(2 ln 2))

/// Beam-radius conversion constant used by the pulse-energy rule.
pub const SPOT_FACTOR: f64 = 1.177;
/// Default transverse FWHM of the Ps cloud (m).
pub const DEFAULT_SPOT_FWHM: f64 = 2.8e-3;
/// Default peak-fluence overdrive F0/F_sat.
pub const DEFAULT_OVERDRIVE: f64 = 2.0;

/// A Gaussian laser pulse, Gaussian in both time and spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaserPulse {
    /// Centre wavelength (m).
    pub lambda0: f64,
    /// Spectral FWHM (m).
    pub dlambda: f64,
    /// Temporal intensity FWHM (s).
    pub duration: f64,
    /// Fluence at the peak of the transverse profile (J/m²).
    pub fluence: f64,
    /// Time of the intensity maximum (s).
    pub t_center: f64,
    #[serde(default)]
    pub polarization: Polarization,
}

impl LaserPulse {
    pub fn new(lambda0: f64, dlambda: f64, duration: f64, fluence: f64, t_center: f64) -> Result<Self> {
        let p = LaserPulse { lambda0, dlambda, duration, fluence, t_center, polarization: Polarization::LinearZ };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda0 > 0.0 && self.lambda0.is_finite()) {
            return Err(Error::domain(format!("pulse wavelength {}", self.lambda0)));
        }
        if !(self.dlambda > 0.0 && self.dlambda.is_finite()) {
            return Err(Error::domain(format!("pulse bandwidth {}", self.dlambda)));
        }
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(Error::domain(format!("pulse duration {}", self.duration)));
        }
        if !(self.fluence >= 0.0 && self.fluence.is_finite()) {
            return Err(Error::domain(format!("pulse fluence {}", self.fluence)));
        }
        if !self.t_center.is_finite() {
            return Err(Error::domain("pulse centre time not finite"));
        }
        let ratio = self.coherence_time() / self.duration;
        if ratio > 0.1 {
            log::warn!(
                "coherence time is {:.3} of the pulse duration; incoherent excitation models may not apply",
                ratio
            );
        }
        Ok(())
    }

    /// Δt_coh = λ²/(c·Δλ).
    pub fn coherence_time(&self) -> f64 {
        self.lambda0 * self.lambda0 / (C * self.dlambda)
    }

    /// Carrier angular frequency.
    pub fn omega0(&self) -> f64 {
        2.0 * PI * C / self.lambda0
    }

    /// Spectral FWHM in angular frequency, 2πc·Δλ/λ².
    pub fn domega(&self) -> f64 {
        2.0 * PI * C * self.dlambda / (self.lambda0 * self.lambda0)
    }

    pub fn sigma_t(&self) -> f64 {
        self.duration * FWHM_TO_SIGMA
    }

    pub fn peak_intensity(&self) -> f64 {
        self.fluence / (self.sigma_t() * (2.0 * PI).sqrt())
    }

    /// I_L(t) (W/m²).
    pub fn intensity(&self, t: f64) -> f64 {
        let x = (t - self.t_center) / self.sigma_t();
        self.peak_intensity() * (-0.5 * x * x).exp()
    }

    /// F(t) = ∫_{−∞}^t I_L(t′) dt′.
    pub fn cumulative_fluence(&self, t: f64) -> f64 {
        let x = (t - self.t_center) / (self.sigma_t() * std::f64::consts::SQRT_2);
        0.5 * self.fluence * libm::erfc(-x)
    }

    /// Photon flux density at time `t` (photons m⁻² s⁻¹).
    pub fn photon_flux(&self, t: f64) -> f64 {
        self.intensity(t) / (HBAR * self.omega0())
    }
}

/// Overlap ∫ g_L(ω) g_D(ω) dω of two unit-area Gaussians with the given FWHMs
/// (rad/s) whose centres are `detuning` apart.
pub fn gaussian_overlap(fwhm_laser: f64, fwhm_line: f64, detuning: f64) -> f64 {
    let s2 = (fwhm_laser * FWHM_TO_SIGMA).powi(2) + (fwhm_line * FWHM_TO_SIGMA).powi(2);
    (-(detuning * detuning) / (2.0 * s2)).exp() / (2.0 * PI * s2).sqrt()
}

/// Excitation rate per unit intensity, W/I_L = B·overlap/c (m²/J).
pub fn rate_per_intensity(einstein_b: f64, overlap: f64) -> f64 {
    einstein_b * overlap / C
}

/// F_sat = c/(B·overlap): the fluence for which ∫W dt = 1.
pub fn fsat_from_overlap(einstein_b: f64, overlap: f64) -> f64 {
    C / (einstein_b * overlap)
}

fn line_b(lower: StateLabel, upper: StateLabel) -> Result<f64> {
    dipole::einstein_b(lower, upper, Polarization::LinearZ)
}

/// Saturation fluence of a Doppler-broadened line driven by a laser whose
/// bandwidth matches the Doppler width:
/// F_sat = (c²/B)·sqrt(2π³/ln 2)·Δλ_D/λ².
pub fn fsat_line(lower: StateLabel, upper: StateLabel, env: &Environment) -> Result<f64> {
    let lambda = constants::transition_wavelength(lower.n, upper.n)?;
    let dl = level_structure::doppler_fwhm(env, lambda)?.dlambda;
    let b = line_b(lower, upper)?;
    Ok(C * C / b * (2.0 * PI.powi(3) / LN_2).sqrt() * dl / (lambda * lambda))
}

/// The same quantity written as c·√2/(B·g_D(0)).
pub fn fsat_line_from_lineshape(lower: StateLabel, upper: StateLabel, env: &Environment) -> Result<f64> {
    let omega0 = constants::transition_angular_frequency(lower.n, upper.n)?;
    let g0 = dipole::doppler_lineshape(env, omega0, 0.0)?;
    Ok(C * std::f64::consts::SQRT_2 / (line_b(lower, upper)? * g0))
}

/// Saturation fluence of a Doppler line for an arbitrary Gaussian laser
/// bandwidth (rad/s FWHM) and centre detuning.
pub fn fsat_line_general(
    lower: StateLabel,
    upper: StateLabel,
    env: &Environment,
    laser_fwhm: f64,
    detuning: f64,
) -> Result<f64> {
    let lambda = constants::transition_wavelength(lower.n, upper.n)?;
    let doppler = level_structure::doppler_fwhm(env, lambda)?.domega();
    let overlap = gaussian_overlap(laser_fwhm, doppler, detuning);
    Ok(fsat_from_overlap(line_b(lower, upper)?, overlap))
}

pub const GROUND: StateLabel = StateLabel { n: 1, l: 0, m: 0 };

/// F_sat(1 → 3) for (1,0,0) → (3,1,0), z polarization, matched bandwidth.
pub fn fsat_13(env: &Environment) -> Result<f64> {
    fsat_line(GROUND, N3_P0, env)
}

/// Band saturation fluence F_sat = c·13.6 eV/(B·ħ·n³), with B the Einstein
/// coefficient of lower → (n, final_l, m).
pub fn fsat_band(lower: StateLabel, n: u32, final_l: u32) -> Result<f64> {
    if n < 16 {
        return Err(Error::domain(format!("band saturation fluence needs n >= 16, got {n}")));
    }
    let upper = StateLabel::new(n, final_l, lower.m)?;
    let b = line_b(lower, upper)?;
    let nf = n as f64;
    Ok(C * E_SCALE / (b * HBAR * nf.powi(3)))
}

/// F_sat(3 → n) from (3,1,0) into the band built on (n,2,0).
pub fn fsat_3n(n: u32) -> Result<f64> {
    fsat_band(N3_P0, n, 2)
}

/// E = π·(overdrive·F_sat/2)·(Δr/1.177)².
pub fn pulse_energy(f_sat: f64, spot_fwhm: f64, overdrive: f64) -> Result<f64> {
    if !(spot_fwhm > 0.0) {
        return Err(Error::domain(format!("spot FWHM {spot_fwhm}")));
    }
    if !(overdrive >= 0.0) {
        return Err(Error::domain(format!("overdrive factor {overdrive}")));
    }
    if overdrive < 1.0 && overdrive != 0.0 {
        log::warn!("overdrive factor {overdrive} < 1 leaves the transition unsaturated");
    }
    Ok(PI * (overdrive * f_sat / 2.0) * (spot_fwhm / SPOT_FACTOR).powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluenceReport {
    /// J/m².
    pub f_sat: f64,
    /// J.
    pub pulse_energy: f64,
    /// m.
    pub spot_fwhm: f64,
    pub overdrive: f64,
}

impl FluenceReport {
    pub fn new(f_sat: f64, spot_fwhm: f64, overdrive: f64) -> Result<Self> {
        Ok(FluenceReport { f_sat, pulse_energy: pulse_energy(f_sat, spot_fwhm, overdrive)?, spot_fwhm, overdrive })
    }
}

/// P(F) = ½·(1 − exp(−2F/F_sat)).
pub fn population_from_fluence(fluence: f64, f_sat: f64) -> f64 {
    0.5 * (-(-2.0 * fluence / f_sat).exp_m1())
}

/// Closed-form upper-level population at time `t`.
pub fn rate_population(t: f64, pulse: &LaserPulse, f_sat: f64) -> f64 {
    population_from_fluence(pulse.cumulative_fluence(t), f_sat)
}

#[derive(Debug, Clone, Serialize)]
pub struct RateSeries {
    /// s.
    pub times: Vec<f64>,
    pub analytic: Vec<f64>,
    pub numeric: Vec<f64>,
}

impl RateSeries {
    pub fn max_abs_difference(&self) -> f64 {
        self.analytic
            .iter()
            .zip(&self.numeric)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Integrates dP/dt = (1 − 2P)·I_L(t)/F_sat with classic RK4 over
/// t_center ± 6σ, and reports the closed form alongside.
pub fn rate_population_numeric(pulse: &LaserPulse, f_sat: f64, steps: usize) -> Result<RateSeries> {
    if !(f_sat > 0.0) {
        return Err(Error::domain(format!("saturation fluence {f_sat}")));
    }
    if steps < 10 {
        return Err(Error::domain("need at least 10 integration steps"));
    }
    let half = 6.0 * pulse.sigma_t();
    let t0 = pulse.t_center - half;
    let dt = 2.0 * half / steps as f64;
    let rhs = |t: f64, p: f64| (1.0 - 2.0 * p) * pulse.intensity(t) / f_sat;

    let mut times = Vec::with_capacity(steps + 1);
    let mut numeric = Vec::with_capacity(steps + 1);
    let mut p = rate_population(t0, pulse, f_sat);
    for k in 0..=steps {
        let t = t0 + k as f64 * dt;
        times.push(t);
        numeric.push(p);
        let k1 = rhs(t, p);
        let k2 = rhs(t + 0.5 * dt, p + 0.5 * dt * k1);
        let k3 = rhs(t + 0.5 * dt, p + 0.5 * dt * k2);
        let k4 = rhs(t + dt, p + dt * k3);
        p += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    let analytic = times.iter().map(|&t| rate_population(t, pulse, f_sat)).collect();
    Ok(RateSeries { times, analytic, numeric })
}
