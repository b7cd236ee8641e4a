//! Phase-diffusion model of a broadband pulsed laser.
//!
//! The optical phase is piecewise constant and is redrawn uniformly on
//! [0, 2π) at regularly spaced jumps. Such a field has a triangular
//! autocorrelation and a sinc² power spectrum; the jump interval is chosen so
//! that the spectral FWHM equals the pulse bandwidth.

use std::f64::consts::PI;

use rand::{Rng, RngExt};

use crate::saturation::LaserPulse;

/// FWHM·τ of the power spectrum sinc²(π f τ) of a field whose phase is redrawn
/// every τ.
pub const SINC2_FWHM_TIMES_INTERVAL: f64 = 0.885_892_941_378_904_4;

/// Phase-jump interval giving a spectral FWHM of `pulse.dlambda`.
pub fn jump_interval(pulse: &LaserPulse) -> f64 {
    SINC2_FWHM_TIMES_INTERVAL * pulse.coherence_time()
}

/// Normalised (unit area in angular frequency) power spectrum of the
/// phase-jump field at angular detuning `delta` from the carrier.
pub fn phase_jump_spectrum(delta: f64, interval: f64) -> f64 {
    let x = 0.5 * delta * interval;
    let sinc = if x.abs() < 1e-8 { 1.0 - x * x / 6.0 } else { x.sin() / x };
    interval / (2.0 * PI) * sinc * sinc
}

/// Random piecewise-constant phase φ(t). Jumps sit on a grid with a random
/// offset so the process is stationary.
#[derive(Debug, Clone)]
pub struct PhaseJumpProcess {
    interval: f64,
    origin: f64,
    segment: i64,
    phase: f64,
}

impl PhaseJumpProcess {
    /// Starts the process at `t_start`.
    pub fn new<R: Rng + ?Sized>(interval: f64, t_start: f64, rng: &mut R) -> Self {
        let offset: f64 = rng.random::<f64>() * interval;
        let phase = rng.random::<f64>() * 2.0 * PI;
        PhaseJumpProcess { interval, origin: t_start - offset, segment: 0, phase }
    }

    pub fn interval(&self) -> f64 {
        self.interval
    }

    /// Phase at time `t`. Calls must come with non-decreasing `t`.
    pub fn phase_at<R: Rng + ?Sized>(&mut self, t: f64, rng: &mut R) -> f64 {
        let seg = ((t - self.origin) / self.interval).floor() as i64;
        if seg != self.segment {
            debug_assert!(seg > self.segment, "phase process queried backwards in time");
            self.segment = seg;
            self.phase = rng.random::<f64>() * 2.0 * PI;
        }
        self.phase
    }
}
