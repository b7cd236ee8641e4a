//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use ps_rydberg::bloch::{noise, BeamGeometry, LadderConfig};
use ps_rydberg::constants::{self, C, KB, M_PS, HBAR};
use ps_rydberg::dipole::{self, Polarization};
use ps_rydberg::saturation::GROUND;
use quadrature::double_exponential;

/// R_nl(r) in atomic units from the associated Laguerre recurrence.
pub fn radial_wavefunction(n: u32, l: u32, r: f64) -> f64 {
    let (nf, lf) = (n as f64, l as f64);
    let rho = 2.0 * r / nf;
    let alpha = 2.0 * lf + 1.0;
    let k = n - l - 1;
    let (mut prev, mut cur) = (1.0, 1.0 + alpha - rho);
    if k == 0 {
        cur = 1.0;
    }
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - rho) * cur - (jf + alpha) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    let ln_norm = 0.5
        * (3.0 * (2.0 / nf).ln() + libm::lgamma(nf - lf) - (2.0 * nf).ln() - libm::lgamma(nf + lf + 1.0));
    let ln_env = if l == 0 { 0.0 } else { lf * rho.ln() };
    (ln_norm + ln_env - 0.5 * rho).exp() * cur
}

/// ∫ R1 R2 r³ dr over [0, ∞), panel by panel.
pub fn radial_quadrature(n1: u32, l1: u32, n2: u32, l2: u32) -> f64 {
    let nmax = n1.max(n2) as f64;
    let r_max = 2.0 * nmax * nmax + 60.0 * nmax + 60.0;
    let panels = 40 * n1.max(n2) as usize + 40;
    let h = r_max / panels as f64;
    let f = |r: f64| radial_wavefunction(n1, l1, r) * radial_wavefunction(n2, l2, r) * r * r * r;
    let mut total = 0.0;
    for i in 0..panels {
        let a = i as f64 * h;
        total += double_exponential::integrate(f, a, a + h, 1e-15).integral;
    }
    total
}

/// Final populations [ground, mid, Rydberg, ionized] of the incoherent
/// three-level rate equations with the same rates as the Bloch model,
/// averaged over the 1-D Maxwell velocity distribution on a uniform grid.
pub fn rate_model(cfg: &LadderConfig) -> [f64; 4] {
    let mid = cfg.mid_level();
    let fin = cfg.final_level().unwrap();
    let b = [
        dipole::einstein_b(GROUND, mid, Polarization::LinearZ).unwrap(),
        dipole::einstein_b(mid, fin, Polarization::LinearZ).unwrap(),
    ];
    let omega0 = [
        constants::transition_angular_frequency(1, mid.n).unwrap(),
        constants::transition_angular_frequency(mid.n, fin.n).unwrap(),
    ];
    let tau = [noise::jump_interval(&cfg.pulses[0]), noise::jump_interval(&cfg.pulses[1])];
    let k = [cfg.pulses[0].omega0() / C, cfg.pulses[1].omega0() / C];
    let s2 = match cfg.geometry {
        BeamGeometry::CoPropagating => 1.0,
        BeamGeometry::CounterPropagating => -1.0,
    };
    let ion = cfg.ionization_cross_sections().unwrap();
    let gamma = cfg.mid_decay_rate();
    let sigma_v = if cfg.sample_velocity { (KB * cfg.env.temperature / M_PS).sqrt() } else { 0.0 };
    let [t0, t1] = cfg.resolved_window();
    let steps = 20_000;
    let h = (t1 - t0) / steps as f64;
    let nv = if sigma_v > 0.0 { 201 } else { 1 };

    let mut total = [0.0; 4];
    let mut wsum = 0.0;
    for iv in 0..nv {
        let x = if nv == 1 { 0.0 } else { -6.0 + 12.0 * iv as f64 / (nv - 1) as f64 };
        let w = (-0.5 * x * x).exp();
        let v = x * sigma_v;
        let det = [
            cfg.pulses[0].omega0() - omega0[0] - k[0] * v,
            cfg.pulses[1].omega0() - omega0[1] - s2 * k[1] * v,
        ];
        let lineshape = [noise::phase_jump_spectrum(det[0], tau[0]), noise::phase_jump_spectrum(det[1], tau[1])];
        let deriv = |t: f64, p: &[f64; 4]| -> [f64; 4] {
            let i1 = cfg.pulses[0].intensity(t);
            let i2 = cfg.pulses[1].intensity(t);
            let w1 = b[0] * i1 * lineshape[0] / C;
            let w2 = b[1] * i2 * lineshape[1] / C;
            let f1 = i1 / (HBAR * cfg.pulses[0].omega0());
            let f2 = i2 / (HBAR * cfg.pulses[1].omega0());
            let g_mid = ion.mid[0] * f1 + ion.mid[1] * f2;
            let g_ryd = ion.rydberg[0] * f1 + ion.rydberg[1] * f2;
            let up1 = w1 * (p[0] - p[1]);
            let up2 = w2 * (p[1] - p[2]);
            [
                -up1 + gamma * p[1],
                up1 - up2 - (gamma + g_mid) * p[1],
                up2 - g_ryd * p[2],
                g_mid * p[1] + g_ryd * p[2],
            ]
        };
        let mut p = [1.0, 0.0, 0.0, 0.0];
        for j in 0..steps {
            let t = t0 + j as f64 * h;
            let add = |p: &[f64; 4], d: &[f64; 4], s: f64| [p[0] + s * d[0], p[1] + s * d[1], p[2] + s * d[2], p[3] + s * d[3]];
            let k1 = deriv(t, &p);
            let k2 = deriv(t + 0.5 * h, &add(&p, &k1, 0.5 * h));
            let k3 = deriv(t + 0.5 * h, &add(&p, &k2, 0.5 * h));
            let k4 = deriv(t + h, &add(&p, &k3, h));
            for i in 0..4 {
                p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        for i in 0..4 {
            total[i] += w * p[i];
        }
        wsum += w;
    }
    total.map(|x| x / wsum)
}
