//! C ABI over `samara-core`.
//!
//! Models are opaque heap handles created by `samara_model_*` and released
//! with `samara_model_free`. Every fallible call returns a `SamaraStatus`;
//! on failure `samara_last_error` gives a message for the calling thread.
//! Output structs are only written on `SAMARA_STATUS_OK`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use samara_core::config::RobotConfig;
use samara_core::propulsion::solve_operating_point;
use samara_core::trim::robot_wing_coefficients;
use samara_core::{solve_trim, Error, Robot};

/// Result code of every fallible call. Values 2 to 4 match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamaraStatus {
    Ok = 0,
    NullPointer = 1,
    InputError = 2,
    SolverError = 3,
    Infeasible = 4,
    Panic = 5,
}

/// Opaque model handle.
pub struct SamaraModel {
    config: RobotConfig,
    robot: Robot,
}

/// Hover trim at one voltage. SI units.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SamaraTrim {
    pub voltage: f64,
    /// rad/s
    pub omega_rev: f64,
    pub thrust: f64,
    pub torque: f64,
    pub payload_margin: f64,
    pub prop_thrust: f64,
    /// rad/s
    pub prop_omega: f64,
    pub prop_induced_velocity: f64,
    pub prop_axial_inflow: f64,
    pub c_t_r: f64,
    pub c_q: f64,
    pub robot_mass: f64,
}

/// Propeller operating point. SI units.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SamaraPropState {
    pub omega: f64,
    pub induced_velocity: f64,
    pub thrust: f64,
    pub torque: f64,
    pub stalled: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SamaraStatus {
    match e {
        Error::Infeasible(_) => SamaraStatus::Infeasible,
        e if e.is_input_error() => SamaraStatus::InputError,
        _ => SamaraStatus::SolverError,
    }
}

/// Runs `f`, turning errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), (SamaraStatus, String)>) -> SamaraStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            SamaraStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            SamaraStatus::Panic
        }
    }
}

fn core(e: Error) -> (SamaraStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (SamaraStatus, String) {
    (SamaraStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (SamaraStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (SamaraStatus::InputError, format!("`{what}` is not UTF-8")))
}

fn new_model(config: RobotConfig) -> Result<*mut SamaraModel, (SamaraStatus, String)> {
    let robot = config.to_robot().map_err(core)?;
    Ok(Box::into_raw(Box::new(SamaraModel { config, robot })))
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn samara_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates a model from a built-in profile such as `crazyflie-bench`.
///
/// # Safety
/// `profile` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn samara_model_from_profile(
    profile: *const c_char,
    out: *mut *mut SamaraModel,
) -> SamaraStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let profile = str_arg(profile, "profile")?;
        *out = new_model(RobotConfig::from_profile(profile).map_err(core)?)?;
        Ok(())
    })
}

/// Creates a model from config-file text layered on a built-in profile.
///
/// # Safety
/// `profile` and `text` must be NUL-terminated strings and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn samara_model_from_config(
    profile: *const c_char,
    text: *const c_char,
    out: *mut *mut SamaraModel,
) -> SamaraStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let profile = str_arg(profile, "profile")?;
        let text = str_arg(text, "text")?;
        let mut config = RobotConfig::from_profile(profile).map_err(core)?;
        config.apply_str(text, Path::new("<text>")).map_err(core)?;
        *out = new_model(config)?;
        Ok(())
    })
}

/// Creates a model from a config file layered on a built-in profile.
///
/// # Safety
/// `profile` and `path` must be NUL-terminated strings and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn samara_model_from_config_file(
    profile: *const c_char,
    path: *const c_char,
    out: *mut *mut SamaraModel,
) -> SamaraStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let profile = str_arg(profile, "profile")?;
        let path = str_arg(path, "path")?;
        let config = RobotConfig::load(profile, &[path.into()]).map_err(core)?;
        *out = new_model(config)?;
        Ok(())
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must come from a `samara_model_*` constructor and not be used again.
#[no_mangle]
pub unsafe extern "C" fn samara_model_free(model: *mut SamaraModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Full config text of the model. Free with `samara_string_free`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn samara_model_config_text(
    model: *const SamaraModel,
    out: *mut *mut c_char,
) -> SamaraStatus {
    guard(|| {
        let model = model.as_ref().ok_or_else(|| null("model"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = CString::new(model.config.to_text())
            .map_err(|e| (SamaraStatus::SolverError, e.to_string()))?
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn samara_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Hover trim at drive voltage `voltage`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn samara_predict(
    model: *const SamaraModel,
    voltage: f64,
    out: *mut SamaraTrim,
) -> SamaraStatus {
    guard(|| {
        let model = model.as_ref().ok_or_else(|| null("model"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let t = solve_trim(voltage, &model.robot).map_err(core)?;
        *out = SamaraTrim {
            voltage: t.voltage,
            omega_rev: t.omega_rev,
            thrust: t.thrust,
            torque: t.torque,
            payload_margin: t.payload_margin,
            prop_thrust: t.prop.thrust,
            prop_omega: t.prop.omega,
            prop_induced_velocity: t.prop.induced_velocity,
            prop_axial_inflow: t.prop.axial_inflow,
            c_t_r: t.c_t_r,
            c_q: t.c_q,
            robot_mass: model.robot.mass(),
        };
        Ok(())
    })
}

/// Wing thrust and torque coefficients: T = c_t_r Ω², Q = c_q Ω².
///
/// # Safety
/// `model` must be a live handle; `c_t_r` and `c_q` writable.
#[no_mangle]
pub unsafe extern "C" fn samara_wing_coefficients(
    model: *const SamaraModel,
    c_t_r: *mut f64,
    c_q: *mut f64,
) -> SamaraStatus {
    guard(|| {
        let model = model.as_ref().ok_or_else(|| null("model"))?;
        if c_t_r.is_null() || c_q.is_null() {
            return Err(null("c_t_r/c_q"));
        }
        let wing = robot_wing_coefficients(&model.robot).map_err(core)?;
        *c_t_r = wing.c_t_r;
        *c_q = wing.c_q;
        Ok(())
    })
}

/// Propeller operating point at `voltage` with axial inflow `inflow` (m/s).
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn samara_prop_operating_point(
    model: *const SamaraModel,
    voltage: f64,
    inflow: f64,
    out: *mut SamaraPropState,
) -> SamaraStatus {
    guard(|| {
        let model = model.as_ref().ok_or_else(|| null("model"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = &model.robot;
        let s = solve_operating_point(voltage, inflow, &r.propeller, &r.motor, r.aero.rho).map_err(core)?;
        *out = SamaraPropState {
            omega: s.omega,
            induced_velocity: s.induced_velocity,
            thrust: s.thrust,
            torque: s.torque,
            stalled: s.stalled,
        };
        Ok(())
    })
}
