//! Power spectrum of the simulated phase-jump field, estimated with averaged
//! periodograms, must have the pulse's bandwidth.

use ps_rydberg::bloch::{noise, LadderConfig, PhaseJumpProcess};
use ps_rydberg::saturation::LaserPulse;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

/// FWHM (rad/s) of the averaged periodogram of e^{iφ(t)}.
fn estimated_fwhm(pulse: &LaserPulse, seed: u64) -> f64 {
    let tau = noise::jump_interval(pulse);
    let dt = tau / 8.0;
    let n = 2048;
    let segments = 400;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fft = FftPlanner::new().plan_fft_forward(n);
    let mut power = vec![0.0; n];
    for _ in 0..segments {
        let mut proc = PhaseJumpProcess::new(tau, 0.0, &mut rng);
        let mut buf: Vec<Complex64> =
            (0..n).map(|k| Complex64::from_polar(1.0, proc.phase_at(k as f64 * dt, &mut rng))).collect();
        fft.process(&mut buf);
        for (p, z) in power.iter_mut().zip(&buf) {
            *p += z.norm_sqr();
        }
    }
    // reorder to centred frequencies and smooth the residual periodogram noise
    let centred: Vec<f64> = (0..n).map(|k| power[(k + n / 2) % n]).collect();
    let w = 7;
    let smooth: Vec<f64> = (0..n)
        .map(|k| {
            let lo = k.saturating_sub(w);
            let hi = (k + w).min(n - 1);
            centred[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect();
    let c = n / 2;
    let half = 0.5 * smooth[c];
    let crossing = |dir: isize| -> f64 {
        let mut k = c as isize;
        while smooth[(k + dir) as usize] > half {
            k += dir;
        }
        let (a, b) = (smooth[k as usize], smooth[(k + dir) as usize]);
        (k - c as isize).abs() as f64 + (a - half) / (a - b)
    };
    let bins = crossing(1) + crossing(-1);
    bins * 2.0 * std::f64::consts::PI / (n as f64 * dt)
}

#[test]
fn spectrum_width_matches_requested_bandwidth() {
    let cfg = LadderConfig::reference_n3();
    for (i, pulse) in cfg.pulses.iter().enumerate() {
        let got = estimated_fwhm(pulse, 11 + i as u64);
        let want = pulse.domega();
        let rel = (got / want - 1.0).abs();
        eprintln!("pulse {}: estimated FWHM / requested = {:.4}", i + 1, got / want);
        assert!(rel < 0.10, "pulse {}: FWHM {got:e} vs {want:e} ({rel:.3})", i + 1);
    }
}
