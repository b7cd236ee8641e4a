//! Three-level ladder density matrix in the interaction picture.
//!
//! Levels are 1 (ground), 2 (intermediate) and 3 (Rydberg). Both couplings
//! carry their full time dependence (envelope, random phase and Doppler
//! detuning) so the Hamiltonian has no diagonal part. Spontaneous decay takes
//! 2 → 1; photoionization drains 2 and 3 into an external sink.

use num_complex::Complex64 as C64;

/// Hermitian 3×3 density matrix (upper triangle implied) plus the ionized
/// probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderState {
    pub p: [f64; 3],
    pub r21: C64,
    pub r32: C64,
    pub r31: C64,
    pub ion: f64,
}

impl LadderState {
    pub fn ground() -> Self {
        LadderState { p: [1.0, 0.0, 0.0], r21: C64::new(0.0, 0.0), r32: C64::new(0.0, 0.0), r31: C64::new(0.0, 0.0), ion: 0.0 }
    }

    /// ρ11 + ρ22 + ρ33 + P_ion.
    pub fn total(&self) -> f64 {
        self.p[0] + self.p[1] + self.p[2] + self.ion
    }

    fn axpy(&self, h: f64, k: &LadderState) -> LadderState {
        LadderState {
            p: [self.p[0] + h * k.p[0], self.p[1] + h * k.p[1], self.p[2] + h * k.p[2]],
            r21: self.r21 + k.r21 * h,
            r32: self.r32 + k.r32 * h,
            r31: self.r31 + k.r31 * h,
            ion: self.ion + h * k.ion,
        }
    }
}

/// Instantaneous drive: half Rabi frequencies (with phase) of the two legs and
/// the loss rates.
#[derive(Debug, Clone, Copy)]
pub struct Drive {
    /// ⟨2|H|1⟩/ħ = (Ω₁/2)·e^{iθ₁}.
    pub a: C64,
    /// ⟨3|H|2⟩/ħ = (Ω₂/2)·e^{iθ₂}.
    pub b: C64,
    /// Spontaneous decay rate 2 → 1 (1/s).
    pub decay: f64,
    /// Photoionization rate out of level 2 (1/s).
    pub ion_mid: f64,
    /// Photoionization rate out of level 3 (1/s).
    pub ion_ryd: f64,
}

/// dρ/dt = −i[H, ρ] + losses.
pub fn derivative(s: &LadderState, d: &Drive) -> LadderState {
    let i = C64::i();
    let (a, b) = (d.a, d.b);
    let ac = a.conj();
    let bc = b.conj();

    let x21 = (ac * s.r21).im;
    let x32 = (bc * s.r32).im;

    let loss2 = d.decay + d.ion_mid;
    let dp1 = 2.0 * x21 + d.decay * s.p[1];
    let dp2 = -2.0 * x21 + 2.0 * x32 - loss2 * s.p[1];
    let dp3 = -2.0 * x32 - d.ion_ryd * s.p[2];

    let dr21 = -i * (a * (s.p[0] - s.p[1]) + bc * s.r31) - 0.5 * loss2 * s.r21;
    let dr32 = -i * (b * (s.p[1] - s.p[2]) - ac * s.r31) - 0.5 * (loss2 + d.ion_ryd) * s.r32;
    let dr31 = -i * (b * s.r21 - a * s.r32) - 0.5 * d.ion_ryd * s.r31;

    LadderState {
        p: [dp1, dp2, dp3],
        r21: dr21,
        r32: dr32,
        r31: dr31,
        ion: d.ion_mid * s.p[1] + d.ion_ryd * s.p[2],
    }
}

/// One classic Runge–Kutta step given the drive at the start, midpoint and
/// end of the step.
pub fn rk4_step(s: &LadderState, dt: f64, start: &Drive, mid: &Drive, end: &Drive) -> LadderState {
    let k1 = derivative(s, start);
    let k2 = derivative(&s.axpy(0.5 * dt, &k1), mid);
    let k3 = derivative(&s.axpy(0.5 * dt, &k2), mid);
    let k4 = derivative(&s.axpy(dt, &k3), end);
    LadderState {
        p: [
            s.p[0] + dt / 6.0 * (k1.p[0] + 2.0 * k2.p[0] + 2.0 * k3.p[0] + k4.p[0]),
            s.p[1] + dt / 6.0 * (k1.p[1] + 2.0 * k2.p[1] + 2.0 * k3.p[1] + k4.p[1]),
            s.p[2] + dt / 6.0 * (k1.p[2] + 2.0 * k2.p[2] + 2.0 * k3.p[2] + k4.p[2]),
        ],
        r21: s.r21 + (k1.r21 + k2.r21 * 2.0 + k3.r21 * 2.0 + k4.r21) * (dt / 6.0),
        r32: s.r32 + (k1.r32 + k2.r32 * 2.0 + k3.r32 * 2.0 + k4.r32) * (dt / 6.0),
        r31: s.r31 + (k1.r31 + k2.r31 * 2.0 + k3.r31 * 2.0 + k4.r31) * (dt / 6.0),
        ion: s.ion + dt / 6.0 * (k1.ion + 2.0 * k2.ion + 2.0 * k3.ion + k4.ion),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn drive(a: f64, b: f64) -> Drive {
        Drive { a: C64::new(a, 0.0), b: C64::new(b, 0.0), decay: 0.0, ion_mid: 0.0, ion_ryd: 0.0 }
    }

    #[test]
    fn resonant_two_level_rabi_flop() {
        // Ω = 2a; after t = π/Ω the population is fully inverted.
        let a = 1.0;
        let d = drive(a, 0.0);
        let steps = 2000;
        let t = std::f64::consts::PI / (2.0 * a);
        let dt = t / steps as f64;
        let mut s = LadderState::ground();
        for _ in 0..steps {
            s = rk4_step(&s, dt, &d, &d, &d);
        }
        assert!((s.p[1] - 1.0).abs() < 1e-10, "{:?}", s);
        assert!(s.p[0].abs() < 1e-10);
    }

    #[test]
    fn trace_is_conserved_with_losses() {
        let d = Drive { a: C64::new(0.3, 0.2), b: C64::new(-0.1, 0.4), decay: 0.2, ion_mid: 0.05, ion_ryd: 0.1 };
        let mut s = LadderState::ground();
        for _ in 0..10_000 {
            s = rk4_step(&s, 0.01, &d, &d, &d);
        }
        assert!((s.total() - 1.0).abs() < 1e-12);
        assert!(s.ion > 0.0);
    }

    #[test]
    fn decay_empties_intermediate_level() {
        let d = Drive { decay: 1.0, ..drive(0.0, 0.0) };
        let mut s = LadderState { p: [0.0, 1.0, 0.0], ..LadderState::ground() };
        for _ in 0..1000 {
            s = rk4_step(&s, 0.001, &d, &d, &d);
        }
        assert!((s.p[1] - (-1.0f64).exp()).abs() < 1e-10);
        assert!((s.p[0] + s.p[1] - 1.0).abs() < 1e-13);
    }
}
