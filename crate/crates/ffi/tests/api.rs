use std::ffi::{CStr, CString};
use std::ptr;

use ps_rydberg_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ps_last_error_message()) }.to_string_lossy().into_owned()
}

fn new_config(scheme: PsScheme) -> *mut PsLadderConfig {
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { ps_ladder_config_new(scheme, &mut cfg) }, PsStatus::Ok);
    assert!(!cfg.is_null());
    cfg
}

#[test]
fn scalar_calculations_match_the_library() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(ps_fsat_13(100.0, 1.0, &mut v), PsStatus::Ok);
        let env = ps_rydberg::level_structure::Environment::new(100.0, 1.0).unwrap();
        assert_eq!(v, ps_rydberg::saturation::fsat_13(&env).unwrap());
        assert_eq!(ps_fsat_3n(25, &mut v), PsStatus::Ok);
        assert_eq!(v, ps_rydberg::saturation::fsat_3n(25).unwrap());
        assert_eq!(ps_radial_element(1, 0, 2, 1, &mut v), PsStatus::Ok);
        assert!((v.abs() - 1.2902).abs() < 1e-4, "{v}");
        assert_eq!(ps_einstein_b(1, 0, 0, 3, 1, 0, &mut v), PsStatus::Ok);
        assert!(v > 0.0);
        let (mut inter, mut ion) = (0u32, 0u32);
        assert_eq!(ps_structure_markers(100.0, 1.0, &mut inter, &mut ion), PsStatus::Ok);
        assert_eq!((inter, ion), (17, 27));
    }
}

#[test]
fn errors_map_to_codes_and_messages() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(ps_einstein_b(1, 0, 0, 3, 0, 0, &mut v), PsStatus::Forbidden);
        assert!(!last_error().is_empty());
        assert_eq!(ps_fsat_13(-1.0, 1.0, &mut v), PsStatus::Domain);
        assert!(last_error().contains("domain"), "{}", last_error());
        assert_eq!(ps_fsat_3n(25, ptr::null_mut()), PsStatus::NullPointer);
        assert_eq!(ps_fsat_3n(25, &mut v), PsStatus::Ok);
        assert_eq!(last_error(), "");
        assert_eq!(ps_pulse_energy(1.0, -1.0, 2.0, &mut v), PsStatus::Domain);
    }
}

#[test]
fn config_round_trips_through_json() {
    let cfg = new_config(PsScheme::ViaN2);
    unsafe {
        assert_eq!(ps_ladder_config_set_seed(cfg, 42), PsStatus::Ok);
        assert_eq!(ps_ladder_config_set_fluence(cfg, 1, 12.5), PsStatus::Ok);
        assert_eq!(ps_ladder_config_set_fluence(cfg, 2, 1.0), PsStatus::InvalidArgument);
        assert_eq!(ps_ladder_config_set_realizations(cfg, 0), PsStatus::InvalidArgument);
        let mut json = ptr::null_mut();
        assert_eq!(ps_ladder_config_to_json(cfg, &mut json), PsStatus::Ok);
        let mut copy = ptr::null_mut();
        assert_eq!(ps_ladder_config_from_json(json, &mut copy), PsStatus::Ok);
        let mut f = 0.0;
        assert_eq!(ps_ladder_config_fluence(copy, 1, &mut f), PsStatus::Ok);
        assert_eq!(f, 12.5);
        ps_string_free(json);
        ps_ladder_config_free(copy);
        ps_ladder_config_free(cfg);
    }
}

#[test]
fn bad_json_is_reported() {
    let mut cfg = ptr::null_mut();
    let text = CString::new(r#"{"scheme": "via_n3", "bogus": 1}"#).unwrap();
    unsafe {
        assert_eq!(ps_ladder_config_from_json(text.as_ptr(), &mut cfg), PsStatus::Json);
        assert!(cfg.is_null());
        assert_eq!(ps_ladder_config_from_json(ptr::null(), &mut cfg), PsStatus::NullPointer);
    }
}

#[test]
fn ensemble_matches_the_library() {
    let cfg = new_config(PsScheme::ViaN3);
    unsafe {
        assert_eq!(ps_ladder_config_set_realizations(cfg, 6), PsStatus::Ok);
        assert_eq!(ps_ladder_config_set_temperature(cfg, 50.0), PsStatus::Ok);
        assert_eq!(ps_ladder_config_set_temperature(cfg, -5.0), PsStatus::Domain);
        let mut res = ptr::null_mut();
        assert_eq!(ps_simulate_ensemble(cfg, &mut res), PsStatus::Ok);

        let mut want = ps_rydberg::bloch::LadderConfig::reference_n3();
        want.n_realizations = 6;
        want.env.temperature = 50.0;
        let direct = ps_rydberg::bloch::simulate_ensemble(&want).unwrap();

        let (mut m, mut se) = (0.0, 0.0);
        assert_eq!(ps_ensemble_final_rydberg(res, &mut m, &mut se), PsStatus::Ok);
        assert_eq!((m, se), (direct.final_rydberg, direct.final_rydberg_se));
        assert_eq!(ps_ensemble_final_ionization(res, &mut m, &mut se), PsStatus::Ok);
        assert_eq!(m, direct.final_ionization);

        let mut n = 0;
        assert_eq!(ps_ensemble_len(res, &mut n), PsStatus::Ok);
        let mut buf = vec![0.0; n];
        assert_eq!(ps_ensemble_series(res, PsSeries::Rydberg, buf.as_mut_ptr(), n), PsStatus::Ok);
        assert_eq!(buf, direct.mean_ryd);
        assert_eq!(ps_ensemble_series(res, PsSeries::Time, buf.as_mut_ptr(), n - 1), PsStatus::InvalidArgument);

        ps_ensemble_free(res);
        ps_ladder_config_free(cfg);
    }
}

#[test]
fn null_handles_are_rejected_and_free_accepts_null() {
    let mut v = 0.0;
    let mut n = 0;
    unsafe {
        assert_eq!(ps_ladder_config_set_seed(ptr::null_mut(), 1), PsStatus::NullPointer);
        assert_eq!(ps_ensemble_len(ptr::null(), &mut n), PsStatus::NullPointer);
        assert_eq!(ps_ensemble_final_rydberg(ptr::null(), &mut v, &mut v), PsStatus::NullPointer);
        ps_ladder_config_free(ptr::null_mut());
        ps_ensemble_free(ptr::null_mut());
        ps_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ps_rydberg.h")).unwrap();
    let source = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() > 20);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    let version = unsafe { CStr::from_ptr(ps_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}
