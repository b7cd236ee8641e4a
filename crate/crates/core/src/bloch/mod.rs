//! Stochastic three-level optical Bloch simulation of the two-step ladder
//! ground → intermediate → Rydberg band.
//!
//! Each realization draws an atom velocity along the beams and an independent
//! phase-jump history for each laser, integrates the density matrix with RK4
//! on a fixed grid, and records populations on a common time grid. Ensembles
//! average realizations run in parallel on independent ChaCha streams.

pub mod model;
pub mod noise;

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{self, units, C, EPS0, HBAR, KB, M_PS};
use crate::dipole::{self, Polarization, StateLabel};
use crate::error::{Error, Result};
use crate::level_structure::Environment;
use crate::saturation::{self, LaserPulse, GROUND};

pub use model::{Drive, LadderState};
pub use noise::PhaseJumpProcess;

/// Largest |δ|·dt allowed for the rotating couplings; the step is shortened
/// for fast atoms.
const MAX_DETUNING_PHASE_PER_STEP: f64 = 0.1;

/// Largest peak Rabi phase Ω·dt per step; strong drives otherwise push RK4
/// populations slightly negative.
const MAX_RABI_PHASE_PER_STEP: f64 = 0.1;

/// Multiplier on the Kramers photoionization estimate that makes the
/// reference 1→3→25 ensemble lose 0.3% of the atoms. Obtained with
/// [`calibrate_ionization_scale`]; see `tests/calibration.rs`.
pub const DEFAULT_IONIZATION_SCALE: f64 = 206.0;

/// Which intermediate level the first laser drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// 1S → 3P → n (205 nm + ~1.7 µm).
    #[default]
    #[value(name = "via_n3")]
    ViaN3,
    /// 1S → 2P → n (243 nm + ~730 nm).
    #[value(name = "via_n2")]
    ViaN2,
}

impl Scheme {
    pub fn mid_level(self) -> StateLabel {
        match self {
            Scheme::ViaN3 => dipole::N3_P0,
            Scheme::ViaN2 => StateLabel { n: 2, l: 1, m: 0 },
        }
    }

    /// Spontaneous lifetime of the intermediate P level (s).
    pub fn default_mid_lifetime(self) -> f64 {
        match self {
            Scheme::ViaN3 => 10.5e-9,
            Scheme::ViaN2 => 3.0e-9,
        }
    }
}

/// Relative direction of the two beams, which sets how the Doppler shifts of
/// the two legs combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum BeamGeometry {
    #[default]
    CoPropagating,
    CounterPropagating,
}

/// Photoionization cross sections (m²) indexed by the pulse supplying the
/// photon: `mid[p]` acts on the intermediate level, `rydberg[p]` on the band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IonizationCrossSections {
    pub mid: [f64; 2],
    pub rydberg: [f64; 2],
}

impl IonizationCrossSections {
    pub fn zero() -> Self {
        IonizationCrossSections { mid: [0.0; 2], rydberg: [0.0; 2] }
    }

    /// Kramers estimate for positronium times `scale`.
    pub fn kramers(mid_n: u32, n_final: u32, pulses: &[LaserPulse; 2], scale: f64) -> Result<Self> {
        let mut out = Self::zero();
        for (p, pulse) in pulses.iter().enumerate() {
            let photon = HBAR * pulse.omega0();
            out.mid[p] = scale * kramers_cross_section(mid_n, photon)?;
            out.rydberg[p] = scale * kramers_cross_section(n_final, photon)?;
        }
        Ok(out)
    }

    pub fn scaled(&self, k: f64) -> Self {
        IonizationCrossSections {
            mid: [self.mid[0] * k, self.mid[1] * k],
            rydberg: [self.rydberg[0] * k, self.rydberg[1] * k],
        }
    }

    fn validate(&self) -> Result<()> {
        if self.mid.iter().chain(self.rydberg.iter()).all(|s| *s >= 0.0 && s.is_finite()) {
            Ok(())
        } else {
            Err(Error::config("ionization cross sections must be finite and non-negative"))
        }
    }
}

/// Kramers photoionization cross section of Ps level `n` for a photon of
/// energy `photon` (J); zero below threshold.
pub fn kramers_cross_section(n: u32, photon: f64) -> Result<f64> {
    let binding = -constants::level_energy(n)?;
    if photon < binding {
        return Ok(0.0);
    }
    let alpha = constants::E_CHARGE * constants::E_CHARGE / (4.0 * PI * EPS0 * HBAR * C);
    let a = constants::PS_LENGTH_SCALE * constants::A0;
    let sigma0 = 64.0 * PI * alpha * a * a / (3.0 * 3f64.sqrt());
    Ok(sigma0 * n as f64 * (binding / photon).powi(3))
}

fn default_true() -> bool {
    true
}

fn default_final_l() -> u32 {
    2
}

/// Everything needed to run the simulator, in SI units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderConfig {
    #[serde(default)]
    pub scheme: Scheme,
    pub n_final: u32,
    /// Orbital quantum number of the unperturbed state the band is built on.
    #[serde(default = "default_final_l")]
    pub final_l: u32,
    pub pulses: [LaserPulse; 2],
    pub env: Environment,
    /// Intermediate-level lifetime (s); scheme default when absent.
    #[serde(default)]
    pub mid_lifetime: Option<f64>,
    /// Spontaneous decay of the intermediate level on/off.
    #[serde(default = "default_true")]
    pub decay: bool,
    /// Calibrated Kramers values when absent.
    #[serde(default)]
    pub ionization: Option<IonizationCrossSections>,
    #[serde(default)]
    pub seed: u64,
    pub n_realizations: usize,
    /// Integrator step (s); a tenth of the shortest coherence time when
    /// absent.
    #[serde(default)]
    pub dt: Option<f64>,
    /// Simulation window (s); two pulse widths either side of the pulses
    /// when absent.
    #[serde(default)]
    pub window: Option<[f64; 2]>,
    /// Spacing of recorded samples (s); 1/400 of the window when absent.
    #[serde(default)]
    pub record_interval: Option<f64>,
    #[serde(default)]
    pub geometry: BeamGeometry,
    /// Draw a thermal velocity per realization; otherwise every atom is at
    /// rest.
    #[serde(default = "default_true")]
    pub sample_velocity: bool,
}

impl LadderConfig {
    /// 1→3→25: 4 ns / 200 µJ/cm² / 0.045 nm at 205 nm and 2 ns / 2 mJ/cm² /
    /// 0.72 nm at ~1.67 µm, both centred at 8 ns in a 16 ns window, at 100 K
    /// and 1 T.
    pub fn reference_n3() -> Self {
        let lambda1 = constants::transition_wavelength(1, 3).expect("valid levels");
        let lambda2 = constants::transition_wavelength(3, 25).expect("valid levels");
        let t0 = 8.0 * units::NS;
        LadderConfig {
            scheme: Scheme::ViaN3,
            n_final: 25,
            final_l: 2,
            pulses: [
                pulse(lambda1, 0.045 * units::NM, 4.0 * units::NS, 200.0 * units::UJ_PER_CM2, t0),
                pulse(lambda2, 0.72 * units::NM, 2.0 * units::NS, 2.0 * units::MJ_PER_CM2, t0),
            ],
            env: Environment::reference(),
            mid_lifetime: None,
            decay: true,
            ionization: None,
            seed: 1,
            n_realizations: 300,
            dt: None,
            window: Some([0.0, 16.0 * units::NS]),
            record_interval: None,
            geometry: BeamGeometry::CoPropagating,
            sample_velocity: true,
        }
    }

    /// 1→2→25: 4 ns / 25.7 µJ/cm² / 0.054 nm at 243 nm and 2 ns / 8 mJ/cm² /
    /// 0.36 nm at ~730 nm.
    pub fn reference_n2() -> Self {
        let lambda1 = constants::transition_wavelength(1, 2).expect("valid levels");
        let lambda2 = constants::transition_wavelength(2, 25).expect("valid levels");
        let t0 = 8.0 * units::NS;
        LadderConfig {
            scheme: Scheme::ViaN2,
            pulses: [
                pulse(lambda1, 0.054 * units::NM, 4.0 * units::NS, 25.7 * units::UJ_PER_CM2, t0),
                pulse(lambda2, 0.36 * units::NM, 2.0 * units::NS, 8.0 * units::MJ_PER_CM2, t0),
            ],
            ..Self::reference_n3()
        }
    }

    pub fn mid_level(&self) -> StateLabel {
        self.scheme.mid_level()
    }

    pub fn final_level(&self) -> Result<StateLabel> {
        StateLabel::new(self.n_final, self.final_l, 0)
    }

    pub fn mid_decay_rate(&self) -> f64 {
        if !self.decay {
            return 0.0;
        }
        1.0 / self.mid_lifetime.unwrap_or_else(|| self.scheme.default_mid_lifetime())
    }

    /// Cross sections in effect: explicit values or the calibrated defaults.
    pub fn ionization_cross_sections(&self) -> Result<IonizationCrossSections> {
        match self.ionization {
            Some(s) => Ok(s),
            None => IonizationCrossSections::kramers(
                self.mid_level().n,
                self.n_final,
                &self.pulses,
                DEFAULT_IONIZATION_SCALE,
            ),
        }
    }

    /// Shortest coherence time among the two pulses.
    pub fn min_coherence_time(&self) -> f64 {
        self.pulses.iter().map(|p| p.coherence_time()).fold(f64::INFINITY, f64::min)
    }

    pub fn max_dt(&self) -> f64 {
        self.min_coherence_time() / 10.0
    }

    pub fn resolved_dt(&self) -> f64 {
        self.dt.unwrap_or_else(|| self.max_dt())
    }

    pub fn resolved_window(&self) -> [f64; 2] {
        self.window.unwrap_or_else(|| {
            let lo = self.pulses.iter().map(|p| p.t_center - 2.0 * p.duration).fold(f64::INFINITY, f64::min);
            let hi = self.pulses.iter().map(|p| p.t_center + 2.0 * p.duration).fold(f64::NEG_INFINITY, f64::max);
            [lo, hi]
        })
    }

    pub fn resolved_record_interval(&self) -> f64 {
        let [a, b] = self.resolved_window();
        self.record_interval.unwrap_or((b - a) / 400.0)
    }

    /// Common sample times of every realization.
    pub fn record_times(&self) -> Vec<f64> {
        let [a, b] = self.resolved_window();
        let h = self.resolved_record_interval();
        let n = ((b - a) / h - 1e-9).ceil().max(1.0) as usize;
        (0..=n).map(|j| a + j as f64 * h).collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.env.validate().map_err(|e| Error::config(e.to_string()))?;
        for p in &self.pulses {
            p.validate().map_err(|e| Error::config(e.to_string()))?;
        }
        let mid = self.mid_level();
        if self.n_final <= mid.n {
            return Err(Error::config(format!("n_final={} must exceed intermediate n={}", self.n_final, mid.n)));
        }
        constants::check_n(self.n_final).map_err(|e| Error::config(e.to_string()))?;
        if self.final_l.abs_diff(mid.l) != 1 || self.final_l >= self.n_final {
            return Err(Error::config(format!("final_l={} not dipole-reachable from {}", self.final_l, mid)));
        }
        if let Some(tau) = self.mid_lifetime {
            if !(tau > 0.0 && tau.is_finite()) {
                return Err(Error::config(format!("mid_lifetime {tau}")));
            }
        }
        if let Some(s) = &self.ionization {
            s.validate()?;
        }
        if self.n_realizations == 0 {
            return Err(Error::config("n_realizations must be at least 1"));
        }
        let dt = self.resolved_dt();
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::config(format!("dt {dt}")));
        }
        if dt > self.max_dt() * (1.0 + 1e-12) {
            return Err(Error::config(format!(
                "dt = {:.3e} s does not resolve the phase jumps; must be at most {:.3e} s",
                dt,
                self.max_dt()
            )));
        }
        let [a, b] = self.resolved_window();
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::config(format!("window [{a}, {b}]")));
        }
        let h = self.resolved_record_interval();
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::config(format!("record_interval {h}")));
        }
        let [p1, p2] = &self.pulses;
        if (p1.t_center - p2.t_center).abs() > p1.duration + p2.duration {
            log::warn!("pulses do not overlap in time; two-step excitation will be negligible");
        }
        for (i, p) in self.pulses.iter().enumerate() {
            if p.t_center + 2.0 * p.duration < a || p.t_center - 2.0 * p.duration > b {
                log::warn!("pulse {} lies outside the simulation window", i + 1);
            }
        }
        if self.n_realizations < 100 {
            log::debug!("{} realizations; reported ensembles should use at least 100", self.n_realizations);
        }
        Ok(())
    }
}

fn pulse(lambda0: f64, dlambda: f64, duration: f64, fluence: f64, t_center: f64) -> LaserPulse {
    LaserPulse { lambda0, dlambda, duration, fluence, t_center, polarization: Polarization::LinearZ }
}

/// Per-leg quantities fixed for a whole run.
#[derive(Debug, Clone, Copy)]
struct Leg {
    pulse: LaserPulse,
    /// Peak half Rabi frequency (rad/s).
    half_rabi_peak: f64,
    /// Laser detuning from the unperturbed transition (rad/s).
    detuning: f64,
    /// Peak photon flux (m⁻² s⁻¹).
    flux_peak: f64,
    k: f64,
}

impl Leg {
    fn new(pulse: LaserPulse, lower: StateLabel, upper: StateLabel) -> Result<Self> {
        let d = dipole::dipole_moment(lower, upper, pulse.polarization)?;
        let i0 = pulse.peak_intensity();
        let field = (2.0 * i0 / (C * EPS0)).sqrt();
        let omega0 = constants::transition_angular_frequency(lower.n, upper.n)?;
        Ok(Leg {
            pulse,
            half_rabi_peak: 0.5 * d * field / HBAR,
            detuning: pulse.omega0() - omega0,
            flux_peak: i0 / (HBAR * pulse.omega0()),
            k: pulse.omega0() / C,
        })
    }

    /// Envelope factor exp(−x²/2) of the intensity at `t`.
    fn envelope(&self, t: f64) -> f64 {
        let x = (t - self.pulse.t_center) / self.pulse.sigma_t();
        (-0.5 * x * x).exp()
    }
}

/// Precomputed run-wide data shared by all realizations.
#[derive(Debug, Clone)]
struct Prepared {
    legs: [Leg; 2],
    decay: f64,
    ion: IonizationCrossSections,
    dt: f64,
    times: Vec<f64>,
    doppler_sign: [f64; 2],
    velocity_sigma: f64,
    intervals: [f64; 2],
}

impl Prepared {
    fn new(config: &LadderConfig) -> Result<Self> {
        config.validate()?;
        let mid = config.mid_level();
        let fin = config.final_level()?;
        let legs = [Leg::new(config.pulses[0], GROUND, mid)?, Leg::new(config.pulses[1], mid, fin)?];
        let doppler_sign = match config.geometry {
            BeamGeometry::CoPropagating => [1.0, 1.0],
            BeamGeometry::CounterPropagating => [1.0, -1.0],
        };
        let velocity_sigma =
            if config.sample_velocity { (KB * config.env.temperature / M_PS).sqrt() } else { 0.0 };
        Ok(Prepared {
            legs,
            decay: config.mid_decay_rate(),
            ion: config.ionization_cross_sections()?,
            dt: config.resolved_dt(),
            times: config.record_times(),
            doppler_sign,
            velocity_sigma,
            intervals: [noise::jump_interval(&config.pulses[0]), noise::jump_interval(&config.pulses[1])],
        })
    }

    fn drive(&self, t: f64, phase: [f64; 2], delta: [f64; 2]) -> Drive {
        let e = [self.legs[0].envelope(t), self.legs[1].envelope(t)];
        let coupling = |p: usize| {
            let amp = self.legs[p].half_rabi_peak * e[p].sqrt();
            let (s, c) = (phase[p] - delta[p] * t).sin_cos();
            num_complex::Complex64::new(amp * c, amp * s)
        };
        let flux = [self.legs[0].flux_peak * e[0], self.legs[1].flux_peak * e[1]];
        Drive {
            a: coupling(0),
            b: coupling(1),
            decay: self.decay,
            ion_mid: self.ion.mid[0] * flux[0] + self.ion.mid[1] * flux[1],
            ion_ryd: self.ion.rydberg[0] * flux[0] + self.ion.rydberg[1] * flux[1],
        }
    }
}

/// Populations of one realization sampled on the record grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimRecord {
    pub times: Vec<f64>,
    pub p_ground: Vec<f64>,
    pub p_mid: Vec<f64>,
    pub p_ryd: Vec<f64>,
    pub p_ion: Vec<f64>,
    /// Atom velocity along the first beam (m/s).
    pub velocity_sample: f64,
    /// Largest |trace − 1| over every integrator step.
    pub max_trace_error: f64,
    /// Most negative population seen over every integrator step (0 if none).
    pub min_population: f64,
    /// Largest |ρij| − sqrt(ρii·ρjj) seen over every integrator step.
    pub max_coherence_excess: f64,
}

impl SimRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_rydberg(&self) -> f64 {
        *self.p_ryd.last().unwrap_or(&0.0)
    }

    pub fn final_ionization(&self) -> f64 {
        *self.p_ion.last().unwrap_or(&0.0)
    }

    fn push(&mut self, t: f64, s: &LadderState) {
        self.times.push(t);
        self.p_ground.push(s.p[0]);
        self.p_mid.push(s.p[1]);
        self.p_ryd.push(s.p[2]);
        self.p_ion.push(s.ion);
    }
}

/// Independent random streams per realization: the velocity draw and one
/// per laser, so the phase histories do not depend on the step size.
const STREAMS_PER_REALIZATION: u64 = 3;

/// ChaCha stream `stream` of the generator seeded with `seed`.
pub fn realization_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One stochastic realization. Pure in (`config`, `realization`): it draws
/// from streams 3·realization .. 3·realization + 2 of the generator seeded
/// with `config.seed`.
pub fn simulate_one(config: &LadderConfig, realization: u64) -> Result<SimRecord> {
    let prep = Prepared::new(config)?;
    Ok(run_realization(&prep, config.seed, realization))
}

fn run_realization(prep: &Prepared, seed: u64, realization: u64) -> SimRecord {
    let base = realization.wrapping_mul(STREAMS_PER_REALIZATION);
    let mut rng = realization_rng(seed, base);
    let mut laser_rng = [realization_rng(seed, base + 1), realization_rng(seed, base + 2)];
    let v = if prep.velocity_sigma > 0.0 {
        Normal::new(0.0, prep.velocity_sigma).expect("positive sigma").sample(&mut rng)
    } else {
        0.0
    };
    let delta = [
        prep.legs[0].detuning - prep.doppler_sign[0] * prep.legs[0].k * v,
        prep.legs[1].detuning - prep.doppler_sign[1] * prep.legs[1].k * v,
    ];
    let fastest = delta[0].abs().max(delta[1].abs());
    let mut dt = if fastest > 0.0 { prep.dt.min(MAX_DETUNING_PHASE_PER_STEP / fastest) } else { prep.dt };
    let rabi = 2.0 * prep.legs[0].half_rabi_peak.max(prep.legs[1].half_rabi_peak);
    if rabi > 0.0 {
        dt = dt.min(MAX_RABI_PHASE_PER_STEP / rabi);
    }

    let t_start = prep.times[0];
    let mut procs = [
        PhaseJumpProcess::new(prep.intervals[0], t_start, &mut laser_rng[0]),
        PhaseJumpProcess::new(prep.intervals[1], t_start, &mut laser_rng[1]),
    ];

    let n = prep.times.len();
    let mut rec = SimRecord {
        times: Vec::with_capacity(n),
        p_ground: Vec::with_capacity(n),
        p_mid: Vec::with_capacity(n),
        p_ryd: Vec::with_capacity(n),
        p_ion: Vec::with_capacity(n),
        velocity_sample: v,
        max_trace_error: 0.0,
        min_population: 0.0,
        max_coherence_excess: 0.0,
    };
    let mut s = LadderState::ground();
    rec.push(t_start, &s);
    for w in prep.times.windows(2) {
        let (a, b) = (w[0], w[1]);
        let m = ((b - a) / dt).ceil().max(1.0) as usize;
        let h = (b - a) / m as f64;
        for k in 0..m {
            let t = a + k as f64 * h;
            let tm = t + 0.5 * h;
            let phase = [procs[0].phase_at(tm, &mut laser_rng[0]), procs[1].phase_at(tm, &mut laser_rng[1])];
            let d0 = prep.drive(t, phase, delta);
            let d1 = prep.drive(tm, phase, delta);
            let d2 = prep.drive(t + h, phase, delta);
            s = model::rk4_step(&s, h, &d0, &d1, &d2);
            track(&mut rec, &s);
        }
        rec.push(b, &s);
    }
    rec
}

fn track(rec: &mut SimRecord, s: &LadderState) {
    rec.max_trace_error = rec.max_trace_error.max((s.total() - 1.0).abs());
    let lo = s.p.iter().copied().fold(0.0, f64::min);
    rec.min_population = rec.min_population.min(lo);
    let bound = |a: f64, b: f64| (a * b).max(0.0).sqrt();
    let excess = [
        s.r21.norm() - bound(s.p[1], s.p[0]),
        s.r32.norm() - bound(s.p[2], s.p[1]),
        s.r31.norm() - bound(s.p[2], s.p[0]),
    ];
    rec.max_coherence_excess = excess.iter().copied().fold(rec.max_coherence_excess, f64::max);
}

/// Mean and standard error over realizations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleResult {
    pub times: Vec<f64>,
    pub mean_ground: Vec<f64>,
    pub mean_mid: Vec<f64>,
    pub mean_ryd: Vec<f64>,
    pub mean_ion: Vec<f64>,
    pub se_ground: Vec<f64>,
    pub se_mid: Vec<f64>,
    pub se_ryd: Vec<f64>,
    pub se_ion: Vec<f64>,
    pub n_realizations: usize,
    pub seed: u64,
    pub final_rydberg: f64,
    pub final_rydberg_se: f64,
    pub final_ionization: f64,
    pub final_ionization_se: f64,
    /// Worst |trace − 1| over all realizations and steps.
    pub max_trace_error: f64,
}

#[derive(Debug, Clone)]
struct Accumulator {
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Accumulator {
    fn new(n: usize) -> Self {
        Accumulator { mean: vec![0.0; n], m2: vec![0.0; n] }
    }

    // Welford update with the k-th sample (k starting at 1).
    fn add(&mut self, k: usize, xs: &[f64]) {
        for ((m, q), &x) in self.mean.iter_mut().zip(self.m2.iter_mut()).zip(xs) {
            let d = x - *m;
            *m += d / k as f64;
            *q += d * (x - *m);
        }
    }

    fn standard_error(&self, k: usize) -> Vec<f64> {
        if k < 2 {
            return vec![0.0; self.mean.len()];
        }
        self.m2.iter().map(|q| (q / (k - 1) as f64 / k as f64).sqrt()).collect()
    }
}

/// Runs `config.n_realizations` realizations (streams 0..N) in parallel and
/// aggregates them in stream order, so the result does not depend on the
/// thread count.
pub fn simulate_ensemble(config: &LadderConfig) -> Result<EnsembleResult> {
    let prep = Prepared::new(config)?;
    let records: Vec<SimRecord> = (0..config.n_realizations as u64)
        .into_par_iter()
        .map(|i| run_realization(&prep, config.seed, i))
        .collect();
    Ok(aggregate(&prep.times, &records, config.seed))
}

/// Mean/SE of a set of realizations sharing one time grid.
pub fn aggregate(times: &[f64], records: &[SimRecord], seed: u64) -> EnsembleResult {
    let n = times.len();
    let mut acc = [Accumulator::new(n), Accumulator::new(n), Accumulator::new(n), Accumulator::new(n)];
    let mut worst = 0.0f64;
    for (k, r) in records.iter().enumerate() {
        acc[0].add(k + 1, &r.p_ground);
        acc[1].add(k + 1, &r.p_mid);
        acc[2].add(k + 1, &r.p_ryd);
        acc[3].add(k + 1, &r.p_ion);
        worst = worst.max(r.max_trace_error);
    }
    let k = records.len();
    let [g, m, r, i] = acc;
    let (se_g, se_m, se_r, se_i) = (g.standard_error(k), m.standard_error(k), r.standard_error(k), i.standard_error(k));
    EnsembleResult {
        times: times.to_vec(),
        final_rydberg: *r.mean.last().unwrap_or(&0.0),
        final_rydberg_se: *se_r.last().unwrap_or(&0.0),
        final_ionization: *i.mean.last().unwrap_or(&0.0),
        final_ionization_se: *se_i.last().unwrap_or(&0.0),
        mean_ground: g.mean,
        mean_mid: m.mean,
        mean_ryd: r.mean,
        mean_ion: i.mean,
        se_ground: se_g,
        se_mid: se_m,
        se_ryd: se_r,
        se_ion: se_i,
        n_realizations: k,
        seed,
        max_trace_error: worst,
    }
}

/// Final mean ionized fraction.
pub fn ionization_fraction(result: &EnsembleResult) -> f64 {
    result.final_ionization
}

/// Saturation fluence of leg `p` as seen by an atom at rest driven by the
/// phase-jump field, c/(B·S(δ)) with S the field's power spectrum. For the
/// band leg B is that of the unperturbed target state.
pub fn incoherent_fsat(config: &LadderConfig, p: usize) -> Result<f64> {
    let mid = config.mid_level();
    let (lower, upper) = match p {
        0 => (GROUND, mid),
        1 => (mid, config.final_level()?),
        _ => return Err(Error::domain(format!("leg index {p}"))),
    };
    let pulse = &config.pulses[p];
    let b = dipole::einstein_b(lower, upper, pulse.polarization)?;
    let omega0 = constants::transition_angular_frequency(lower.n, upper.n)?;
    let s = noise::phase_jump_spectrum(pulse.omega0() - omega0, noise::jump_interval(pulse));
    Ok(saturation::fsat_from_overlap(b, s))
}

/// Finds the factor `k` such that the ensemble of `config` with its
/// ionization cross sections multiplied by `k` loses `target` of its atoms.
/// Bisects in log k between `lo` and `hi`; the same random streams are used at
/// every trial so the loss is monotone in k.
pub fn calibrate_ionization_scale(config: &LadderConfig, target: f64, lo: f64, hi: f64, rel_tol: f64) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) || !(lo > 0.0 && hi > lo) {
        return Err(Error::domain("calibration bracket or target invalid"));
    }
    let base = match config.ionization {
        Some(s) => s,
        None => IonizationCrossSections::kramers(config.mid_level().n, config.n_final, &config.pulses, 1.0)?,
    };
    let loss = |k: f64| -> Result<f64> {
        let mut c = config.clone();
        c.ionization = Some(base.scaled(k));
        Ok(simulate_ensemble(&c)?.final_ionization)
    };
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (loss(a)? - target, loss(b)? - target);
    if fa > 0.0 || fb < 0.0 {
        return Err(Error::Convergence(format!("target loss {target} not bracketed by scale [{lo}, {hi}]")));
    }
    for _ in 0..200 {
        let mid = (a * b).sqrt();
        if (b - a) / mid < rel_tol {
            return Ok(mid);
        }
        if loss(mid)? < target {
            a = mid;
        } else {
            b = mid;
        }
    }
    Err(Error::Convergence("ionization-scale bisection did not converge".into()))
}
