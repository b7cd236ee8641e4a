//! One-dimensional parameter scans of the ensemble simulator.

use serde::{Deserialize, Serialize};

use crate::bloch;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::saturation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ScanAxis {
    /// Temperature (K).
    #[value(name = "temperature", alias = "T")]
    Temperature,
    /// Magnetic field (T).
    #[value(name = "bfield", alias = "B")]
    BField,
    /// Final principal quantum number; the second laser is retuned.
    #[value(name = "n-final")]
    NFinal,
    /// Second-pulse fluence (µJ/cm², or multiples of the band saturation
    /// fluence with `relative`).
    #[value(name = "fluence2")]
    Fluence2,
    /// Second-pulse bandwidth (nm).
    #[value(name = "dlambda2")]
    Dlambda2,
}

impl ScanAxis {
    pub fn label(self, relative: bool) -> &'static str {
        match self {
            ScanAxis::Temperature => "T[K]",
            ScanAxis::BField => "B[T]",
            ScanAxis::NFinal => "n_final",
            ScanAxis::Fluence2 if relative => "F2/F_sat",
            ScanAxis::Fluence2 => "F2[uJ/cm2]",
            ScanAxis::Dlambda2 => "dlambda2[nm]",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    pub value: f64,
    pub final_rydberg: f64,
    pub final_rydberg_se: f64,
    pub final_ionization: f64,
    pub final_ionization_se: f64,
}

/// `base` with one axis set to `value`. With `relative`, a fluence value is a
/// multiple of the band saturation fluence of the (possibly scanned) final
/// level.
pub fn apply(base: &RunConfig, axis: ScanAxis, value: f64, relative: bool) -> Result<RunConfig> {
    let mut c = base.clone();
    let mut pulses = c.pulse_blocks();
    match axis {
        ScanAxis::Temperature => c.environment.temperature_k = value,
        ScanAxis::BField => c.environment.b_field_t = value,
        ScanAxis::NFinal => {
            if value.fract() != 0.0 || value < 1.0 {
                return Err(Error::config(format!("n_final must be a positive integer, got {value}")));
            }
            c.scheme.n_final = value as u32;
            // keep the second laser resonant with the new band
            pulses[1].wavelength_nm = None;
        }
        ScanAxis::Fluence2 => {
            pulses[1].fluence_uj_cm2 = if relative {
                let f = saturation::fsat_band(c.scheme.ladder.mid_level(), c.scheme.n_final, c.scheme.final_l)?;
                value * f / crate::constants::units::UJ_PER_CM2
            } else {
                value
            };
        }
        ScanAxis::Dlambda2 => pulses[1].dlambda_nm = value,
    }
    c.pulses = Some(pulses);
    Ok(c)
}

/// Runs one ensemble per grid value with the base seed, so all points share
/// their random streams.
pub fn run(base: &RunConfig, axis: ScanAxis, values: &[f64], relative: bool) -> Result<Vec<ScanPoint>> {
    if values.is_empty() {
        return Err(Error::config("scan grid is empty"));
    }
    values
        .iter()
        .map(|&v| {
            let cfg = apply(base, axis, v, relative)?.to_ladder()?;
            let r = bloch::simulate_ensemble(&cfg)?;
            log::info!("{:?} = {v}: Rydberg {:.4} ± {:.4}", axis, r.final_rydberg, r.final_rydberg_se);
            Ok(ScanPoint {
                value: v,
                final_rydberg: r.final_rydberg,
                final_rydberg_se: r.final_rydberg_se,
                final_ionization: r.final_ionization,
                final_ionization_se: r.final_ionization_se,
            })
        })
        .collect()
}

/// Whether every pair of points agrees within `k` combined standard errors.
pub fn is_flat(points: &[ScanPoint], k: f64) -> bool {
    points.iter().enumerate().all(|(i, a)| {
        points[i + 1..].iter().all(|b| {
            let se = (a.final_rydberg_se.powi(2) + b.final_rydberg_se.powi(2)).sqrt();
            (a.final_rydberg - b.final_rydberg).abs() <= k * se
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_grid_is_an_error() {
        assert!(matches!(run(&RunConfig::default(), ScanAxis::BField, &[], false), Err(Error::Config(_))));
    }

    #[test]
    fn relative_fluence_uses_band_fsat() {
        let c = apply(&RunConfig::default(), ScanAxis::Fluence2, 2.0, true).unwrap();
        let f = c.pulses.unwrap()[1].fluence_uj_cm2;
        assert!((f / 2.0 - 972.6).abs() < 1.0, "{f}");
    }

    #[test]
    fn fractional_n_rejected() {
        assert!(apply(&RunConfig::default(), ScanAxis::NFinal, 20.5, false).is_err());
    }

    #[test]
    fn flatness() {
        let p = |r: f64| ScanPoint {
            value: 0.0,
            final_rydberg: r,
            final_rydberg_se: 0.01,
            final_ionization: 0.0,
            final_ionization_se: 0.0,
        };
        assert!(is_flat(&[p(0.30), p(0.31), p(0.29)], 2.0));
        assert!(!is_flat(&[p(0.30), p(0.40)], 2.0));
    }
}
