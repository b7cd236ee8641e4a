//! C ABI over `ps_rydberg`. All quantities are SI. Every function returns a
//! [`PsStatus`]; results go through out pointers. On failure the message is
//! available from [`ps_last_error_message`] on the same thread.
//!
//! Handles are opaque: create with `*_new`/`*_from_json`, release with the
//! matching `*_free`. Strings returned by the library are freed with
//! [`ps_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ps_rydberg::bloch::{self, EnsembleResult, LadderConfig};
use ps_rydberg::dipole::{self, Polarization, StateLabel};
use ps_rydberg::level_structure::{self, Environment};
use ps_rydberg::saturation;
use ps_rydberg::Error;

/// Status codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Forbidden = 4,
    Config = 5,
    Convergence = 6,
    Json = 7,
    Io = 8,
    Panic = 9,
}

/// Ladder scheme: which intermediate level the first laser drives.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsScheme {
    ViaN3 = 0,
    ViaN2 = 1,
}

/// Time series stored in a [`PsEnsemble`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsSeries {
    Time = 0,
    Ground = 1,
    Mid = 2,
    Rydberg = 3,
    Ionized = 4,
    GroundSe = 5,
    MidSe = 6,
    RydbergSe = 7,
    IonizedSe = 8,
}

/// Opaque simulation configuration.
pub struct PsLadderConfig(LadderConfig);

/// Opaque ensemble result.
pub struct PsEnsemble(EnsembleResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> PsStatus {
    match err {
        Error::Domain(_) => PsStatus::Domain,
        Error::Forbidden(_) => PsStatus::Forbidden,
        Error::Config(_) => PsStatus::Config,
        Error::Convergence(_) => PsStatus::Convergence,
        Error::Json(_) => PsStatus::Json,
        Error::Io(_) => PsStatus::Io,
    }
}

struct Failure(PsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(PsStatus::NullPointer, format!("{what} is NULL"))
}

/// Runs `f`, converting errors and panics into a status and the thread's
/// last error message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            PsStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("internal panic: {msg}"));
            PsStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn config_mut<'a>(cfg: *mut PsLadderConfig) -> Result<&'a mut LadderConfig, Failure> {
    cfg.as_mut().map(|c| &mut c.0).ok_or_else(|| null("config handle"))
}

unsafe fn config_ref<'a>(cfg: *const PsLadderConfig) -> Result<&'a LadderConfig, Failure> {
    cfg.as_ref().map(|c| &c.0).ok_or_else(|| null("config handle"))
}

unsafe fn ensemble_ref<'a>(res: *const PsEnsemble) -> Result<&'a EnsembleResult, Failure> {
    res.as_ref().map(|r| &r.0).ok_or_else(|| null("ensemble handle"))
}

fn leg(index: u32) -> Result<usize, Failure> {
    match index {
        0 | 1 => Ok(index as usize),
        _ => Err(Failure(PsStatus::InvalidArgument, format!("leg index {index} is not 0 or 1"))),
    }
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn ps_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ps_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by the library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ps_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Saturation fluence (J/m²) of 1S → 3P at `temperature` (K) and `b_field` (T).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ps_fsat_13(temperature: f64, b_field: f64, out: *mut f64) -> PsStatus {
    guard(|| {
        let env = Environment::new(temperature, b_field)?;
        write(out, saturation::fsat_13(&env)?)
    })
}

/// Band saturation fluence (J/m²) from 3P into the n band.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ps_fsat_3n(n: u32, out: *mut f64) -> PsStatus {
    guard(|| write(out, saturation::fsat_3n(n)?))
}

/// Pulse energy (J) reaching `overdrive`·F_sat over a spot of FWHM
/// `spot_fwhm` (m).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ps_pulse_energy(f_sat: f64, spot_fwhm: f64, overdrive: f64, out: *mut f64) -> PsStatus {
    guard(|| write(out, saturation::pulse_energy(f_sat, spot_fwhm, overdrive)?))
}

/// Hydrogen radial integral ⟨n1 l1|r|n2 l2⟩ in Bohr radii.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ps_radial_element(n1: u32, l1: u32, n2: u32, l2: u32, out: *mut f64) -> PsStatus {
    guard(|| write(out, dipole::hydrogen_radial(n1, l1, n2, l2)?))
}

/// Einstein B coefficient (m³ J⁻¹ s⁻²) of a z-polarized positronium
/// transition.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ps_einstein_b(
    n1: u32,
    l1: u32,
    m1: i32,
    n2: u32,
    l2: u32,
    m2: i32,
    out: *mut f64,
) -> PsStatus {
    guard(|| {
        let lower = StateLabel::new(n1, l1, m1)?;
        let upper = StateLabel::new(n2, l2, m2)?;
        write(out, dipole::einstein_b(lower, upper, Polarization::LinearZ)?)
    })
}

/// First n where neighbouring Stark manifolds overlap and first n that
/// ionizes in the motional field; 0 when none exists below the search limit.
///
/// # Safety
/// Both out pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ps_structure_markers(
    temperature: f64,
    b_field: f64,
    interleaving_onset: *mut u32,
    ionization_onset: *mut u32,
) -> PsStatus {
    guard(|| {
        let env = Environment::new(temperature, b_field)?;
        let m = level_structure::structure_markers(&env)?;
        write(interleaving_onset, m.interleaving_onset.unwrap_or(0))?;
        write(ionization_onset, m.ionization_onset.unwrap_or(0))
    })
}

/// Reference configuration of a scheme: 100 K, 1 T, n = 25, 300 realizations.
///
/// # Safety
/// `out` must be valid for writes; the handle is freed with
/// [`ps_ladder_config_free`].
#[no_mangle]
pub unsafe extern "C" fn ps_ladder_config_new(scheme: PsScheme, out: *mut *mut PsLadderConfig) -> PsStatus {
    guard(|| {
        let c = match scheme {
            PsScheme::ViaN3 => LadderConfig::reference_n3(),
            PsScheme::ViaN2 => LadderConfig::reference_n2(),
        };
        write(out, Box::into_raw(Box::new(PsLadderConfig(c))))
    })
}

/// Parses a configuration from JSON (the format of
/// [`ps_ladder_config_to_json`]) and validates it.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ps_ladder_config_from_json(json: *const c_char, out: *mut *mut PsLadderConfig) -> PsStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure(PsStatus::InvalidArgument, format!("json is not UTF-8: {e}")))?;
        let c: LadderConfig = serde_json::from_str(text).map_err(Error::from)?;
        c.validate()?;
        write(out, Box::into_raw(Box::new(PsLadderConfig(c))))
    })
}

/// Serializes a configuration to JSON; free the string with
/// [`ps_string_free`].
///
/// # Safety
/// `cfg` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ps_ladder_config_to_json(cfg: *const PsLadderConfig, out: *mut *mut c_char) -> PsStatus {
    guard(|| {
        let c = config_ref(cfg)?;
        let s = serde_json::to_string(c).map_err(Error::from)?;
        let s = CString::new(s).map_err(|e| Failure(PsStatus::Json, e.to_string()))?;
        write(out, s.into_raw())
    })
}

/// Releases a configuration handle. NULL is ignored.
///
/// # Safety
/// `cfg` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ps_ladder_config_free(cfg: *mut PsLadderConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_ladder_config_set_seed(cfg: *mut PsLadderConfig, seed: u64) -> PsStatus {
    guard(|| {
        config_mut(cfg)?.seed = seed;
        Ok(())
    })
}

/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_ladder_config_set_realizations(cfg: *mut PsLadderConfig, n: usize) -> PsStatus {
    guard(|| {
        let c = config_mut(cfg)?;
        if n == 0 {
            return Err(Failure(PsStatus::InvalidArgument, "realization count must be positive".into()));
        }
        c.n_realizations = n;
        Ok(())
    })
}

/// Gas temperature (K).
///
/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_ladder_config_set_temperature(cfg: *mut PsLadderConfig, kelvin: f64) -> PsStatus {
    guard(|| {
        let c = config_mut(cfg)?;
        c.env = Environment::new(kelvin, c.env.b_field)?;
        Ok(())
    })
}

/// Fluence (J/m²) of pulse `leg` (0 or 1).
///
/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_ladder_config_set_fluence(cfg: *mut PsLadderConfig, leg_index: u32, fluence: f64) -> PsStatus {
    guard(|| {
        let c = config_mut(cfg)?;
        let p = leg(leg_index)?;
        if !(fluence >= 0.0 && fluence.is_finite()) {
            return Err(Failure(PsStatus::InvalidArgument, format!("fluence {fluence}")));
        }
        c.pulses[p].fluence = fluence;
        Ok(())
    })
}

/// Enables or disables radiative decay of the intermediate level.
///
/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_ladder_config_set_decay(cfg: *mut PsLadderConfig, enabled: bool) -> PsStatus {
    guard(|| {
        config_mut(cfg)?.decay = enabled;
        Ok(())
    })
}

/// # Safety
/// `cfg` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ps_ladder_config_fluence(cfg: *const PsLadderConfig, leg_index: u32, out: *mut f64) -> PsStatus {
    guard(|| {
        let c = config_ref(cfg)?;
        write(out, c.pulses[leg(leg_index)?].fluence)
    })
}

/// Runs the stochastic ensemble. Release the result with
/// [`ps_ensemble_free`].
///
/// # Safety
/// `cfg` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ps_simulate_ensemble(cfg: *const PsLadderConfig, out: *mut *mut PsEnsemble) -> PsStatus {
    guard(|| {
        let c = config_ref(cfg)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let r = bloch::simulate_ensemble(c)?;
        write(out, Box::into_raw(Box::new(PsEnsemble(r))))
    })
}

/// Releases an ensemble handle. NULL is ignored.
///
/// # Safety
/// `res` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ps_ensemble_free(res: *mut PsEnsemble) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// Number of recorded time points.
///
/// # Safety
/// `res` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ps_ensemble_len(res: *const PsEnsemble, out: *mut usize) -> PsStatus {
    guard(|| write(out, ensemble_ref(res)?.times.len()))
}

/// Final Rydberg fraction and its standard error.
///
/// # Safety
/// `res` must be a live handle; both out pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ps_ensemble_final_rydberg(res: *const PsEnsemble, mean: *mut f64, se: *mut f64) -> PsStatus {
    guard(|| {
        let r = ensemble_ref(res)?;
        write(mean, r.final_rydberg)?;
        write(se, r.final_rydberg_se)
    })
}

/// Final ionized fraction and its standard error.
///
/// # Safety
/// `res` must be a live handle; both out pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ps_ensemble_final_ionization(res: *const PsEnsemble, mean: *mut f64, se: *mut f64) -> PsStatus {
    guard(|| {
        let r = ensemble_ref(res)?;
        write(mean, r.final_ionization)?;
        write(se, r.final_ionization_se)
    })
}

/// Copies one time series into `buf`, which must hold exactly
/// [`ps_ensemble_len`] values.
///
/// # Safety
/// `res` must be a live handle; `buf` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn ps_ensemble_series(
    res: *const PsEnsemble,
    series: PsSeries,
    buf: *mut f64,
    len: usize,
) -> PsStatus {
    guard(|| {
        let r = ensemble_ref(res)?;
        let src = match series {
            PsSeries::Time => &r.times,
            PsSeries::Ground => &r.mean_ground,
            PsSeries::Mid => &r.mean_mid,
            PsSeries::Rydberg => &r.mean_ryd,
            PsSeries::Ionized => &r.mean_ion,
            PsSeries::GroundSe => &r.se_ground,
            PsSeries::MidSe => &r.se_mid,
            PsSeries::RydbergSe => &r.se_ryd,
            PsSeries::IonizedSe => &r.se_ion,
        };
        if buf.is_null() {
            return Err(null("buffer"));
        }
        if len != src.len() {
            return Err(Failure(PsStatus::InvalidArgument, format!("buffer holds {len} values, series has {}", src.len())));
        }
        ptr::copy_nonoverlapping(src.as_ptr(), buf, len);
        Ok(())
    })
}
