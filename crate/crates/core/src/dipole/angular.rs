use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Laser polarization. Only linear polarization along the field axis is
/// modelled, giving Δm = 0 transitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarization {
    #[default]
    LinearZ,
}

/// |⟨l1 m1| cos θ |l2 m2⟩|², the squared angular part of a z-polarized
/// dipole element.
pub fn angular_factor(l1: u32, m1: i32, l2: u32, m2: i32, pol: Polarization) -> Result<f64> {
    if l1.abs_diff(l2) != 1 {
        return Err(Error::Forbidden(format!("|Δl| must be 1: l={l1} -> l={l2}")));
    }
    if m1.unsigned_abs() > l1 || m2.unsigned_abs() > l2 {
        return Err(Error::domain(format!("|m| > l in ({l1},{m1}) or ({l2},{m2})")));
    }
    match pol {
        Polarization::LinearZ => {
            if m1 != m2 {
                return Ok(0.0);
            }
            let l = l1.max(l2) as f64;
            let m = m1 as f64;
            Ok((l * l - m * m) / ((2.0 * l + 1.0) * (2.0 * l - 1.0)))
        }
    }
}
