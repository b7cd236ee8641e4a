//! The default photoionization multiplier reproduces the 0.3% loss of the
//! reference 1→3→25 ensemble, and the bisection recovers it.

use ps_rydberg::bloch::{calibrate_ionization_scale, simulate_ensemble, LadderConfig, DEFAULT_IONIZATION_SCALE};
use ps_rydberg::Error;

const TARGET_LOSS: f64 = 0.003;

#[test]
fn default_scale_gives_target_loss() {
    let r = simulate_ensemble(&LadderConfig::reference_n3()).unwrap();
    assert!((r.final_ionization - TARGET_LOSS).abs() < 0.05 * TARGET_LOSS, "loss {}", r.final_ionization);
}

#[test]
fn bisection_recovers_default_scale() {
    let mut c = LadderConfig::reference_n3();
    c.ionization = None;
    let k = calibrate_ionization_scale(&c, TARGET_LOSS, 180.0, 240.0, 0.02).unwrap();
    assert!((k / DEFAULT_IONIZATION_SCALE - 1.0).abs() < 0.03, "scale {k}");
}

#[test]
fn unbracketed_target_is_a_convergence_error() {
    let mut c = LadderConfig::reference_n3();
    c.ionization = None;
    c.n_realizations = 20;
    assert!(matches!(calibrate_ionization_scale(&c, 0.5, 1.0, 2.0, 0.1), Err(Error::Convergence(_))));
}
