//! Motor-driven propeller under axial inflow.
//!
//! The propeller translates with the revolving robot, so it sees an axial
//! inflow `u = Ω·R_m`. Its uniform induced velocity follows from equating the
//! momentum and blade-element thrusts (a quadratic), its drag torque from the
//! lumped profile and induced terms, and its spin rate from the steady-state
//! motor torque balance.

use std::f64::consts::PI;
use std::io::Write;

use crate::error::{Error, Result};
use crate::model::{MotorParams, PropellerParams};
use crate::report::sig9;

/// Solution of the momentum/blade-element quadratic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InducedVelocity {
    /// m/s, ≥ 0
    pub velocity: f64,
    /// Blade-element thrust is non-positive even with zero induced flow.
    pub stalled: bool,
}

/// Uniform axial induced velocity at spin rate `omega` and axial inflow `inflow`.
pub fn induced_velocity(
    omega: f64,
    inflow: f64,
    prop: &PropellerParams,
    rho: f64,
) -> InducedVelocity {
    let r = prop.radius;
    let n = prop.blade_count as f64;
    // A v² + b v + c = 0
    let a = 2.0 * rho * PI * r * r;
    let half = 0.5 * rho * n * r.powi(4) * omega * omega;
    let slope = prop.a1 / (omega * r);
    let b = a * inflow + half * slope;
    let c = -half * (prop.a0 - slope * inflow);
    if c >= 0.0 {
        return InducedVelocity {
            velocity: 0.0,
            stalled: true,
        };
    }
    // -2c / (b + sqrt(b² - 4ac)) avoids cancellation for small roots
    let velocity = -2.0 * c / (b + (b * b - 4.0 * a * c).sqrt());
    InducedVelocity {
        velocity,
        stalled: false,
    }
}

/// Blade-element thrust of one propeller.
pub fn blade_element_thrust(
    omega: f64,
    induced: f64,
    inflow: f64,
    prop: &PropellerParams,
    rho: f64,
) -> f64 {
    let r = prop.radius;
    0.5 * rho
        * prop.blade_count as f64
        * r.powi(4)
        * (prop.a0 - prop.a1 * (induced + inflow) / (omega * r))
        * omega
        * omega
}

/// Momentum-theory thrust of one propeller.
pub fn momentum_thrust(induced: f64, inflow: f64, prop: &PropellerParams, rho: f64) -> f64 {
    2.0 * rho * PI * prop.radius * prop.radius * induced * (induced + inflow)
}

/// Aerodynamic torque: profile drag plus induced and inflow power terms.
pub fn propeller_torque(
    omega: f64,
    induced: f64,
    inflow: f64,
    thrust: f64,
    prop: &PropellerParams,
    rho: f64,
) -> f64 {
    0.5 * rho * prop.blade_count as f64 * prop.radius.powi(5) * prop.a2 * omega * omega
        + thrust * (prop.kappa * induced + inflow) / omega
}

/// Steady operating point of one motor-propeller pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropellerState {
    /// Propeller spin rate, rad/s.
    pub omega: f64,
    /// m/s
    pub induced_velocity: f64,
    /// N; negative when windmilling
    pub thrust: f64,
    /// N·m
    pub torque: f64,
    /// m/s
    pub axial_inflow: f64,
    pub stalled: bool,
}

impl PropellerState {
    /// Aerodynamic state at a prescribed spin rate, ignoring the motor.
    pub fn at_speed(omega: f64, inflow: f64, prop: &PropellerParams, rho: f64) -> Self {
        let iv = induced_velocity(omega, inflow, prop, rho);
        let thrust = blade_element_thrust(omega, iv.velocity, inflow, prop, rho);
        Self {
            omega,
            induced_velocity: iv.velocity,
            thrust,
            torque: propeller_torque(omega, iv.velocity, inflow, thrust, prop, rho),
            axial_inflow: inflow,
            stalled: iv.stalled || thrust <= 0.0,
        }
    }
}

/// Motor torque minus propeller torque at spin rate `omega`.
fn torque_excess(
    voltage: f64,
    omega: f64,
    inflow: f64,
    prop: &PropellerParams,
    motor: &MotorParams,
    rho: f64,
) -> f64 {
    motor.torque(voltage, omega) - PropellerState::at_speed(omega, inflow, prop, rho).torque
}

/// Finds the spin rate at which motor and propeller torques balance.
pub fn solve_operating_point(
    voltage: f64,
    inflow: f64,
    prop: &PropellerParams,
    motor: &MotorParams,
    rho: f64,
) -> Result<PropellerState> {
    if !(voltage > 0.0) {
        return Err(Error::invalid("voltage", "must be positive"));
    }
    if !(inflow >= 0.0) {
        return Err(Error::invalid("axial_inflow", "must be non-negative"));
    }
    let f = |w: f64| torque_excess(voltage, w, inflow, prop, motor, rho);
    let top = motor.no_load_speed(voltage);
    let (mut lo, mut hi) = (1e-9 * top, top);
    let (f_lo, f_hi) = (f(lo), f(hi));
    if !(f_lo > 0.0 && f_hi <= 0.0) {
        return Err(Error::NoOperatingPoint { voltage, inflow });
    }
    // bisection, then secant polish kept inside the bracket
    while hi - lo > 1e-13 * top {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (flo, fhi) = (f(lo), f(hi));
    let mut omega = if fhi != flo {
        (lo - flo * (hi - lo) / (fhi - flo)).clamp(lo, hi)
    } else {
        0.5 * (lo + hi)
    };
    if f(omega).abs() > flo.abs().min(fhi.abs()) {
        omega = if flo.abs() < fhi.abs() { lo } else { hi };
    }
    Ok(PropellerState::at_speed(omega, inflow, prop, rho))
}

/// Propeller thrust at drive voltage `voltage` on a robot revolving at `omega_rev`
/// with the propeller mounted at radius `r_m`.
pub fn thrust_map(
    voltage: f64,
    omega_rev: f64,
    r_m: f64,
    prop: &PropellerParams,
    motor: &MotorParams,
    rho: f64,
) -> Result<f64> {
    if !(r_m > 0.0) {
        return Err(Error::invalid("r_m", "must be positive"));
    }
    Ok(solve_operating_point(voltage, omega_rev * r_m, prop, motor, rho)?.thrust)
}

/// One row of the propeller inflow curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropCurvePoint {
    pub inflow: f64,
    pub coupled: PropellerState,
    /// Thrust if the spin rate stayed at its zero-inflow value.
    pub fixed_speed_thrust: f64,
}

/// Coupled and constant-speed thrust over inflows `0..=inflow_max`.
pub fn prop_curve(
    voltage: f64,
    inflow_max: f64,
    steps: usize,
    prop: &PropellerParams,
    motor: &MotorParams,
    rho: f64,
) -> Result<Vec<PropCurvePoint>> {
    if steps < 2 {
        return Err(Error::invalid("steps", "need at least two points"));
    }
    if !(inflow_max > 0.0) {
        return Err(Error::invalid("inflow_max", "must be positive"));
    }
    let static_state = solve_operating_point(voltage, 0.0, prop, motor, rho)?;
    (0..steps)
        .map(|i| {
            let inflow = inflow_max * i as f64 / (steps - 1) as f64;
            let coupled = solve_operating_point(voltage, inflow, prop, motor, rho)?;
            let fixed = PropellerState::at_speed(static_state.omega, inflow, prop, rho);
            Ok(PropCurvePoint {
                inflow,
                coupled,
                fixed_speed_thrust: fixed.thrust,
            })
        })
        .collect()
}

/// Writes `axial_inflow_m_s,thrust_N,omega_rad_s,fixed_omega_thrust_N` rows.
pub fn write_prop_curve_csv<W: Write>(mut out: W, points: &[PropCurvePoint]) -> Result<()> {
    writeln!(out, "axial_inflow_m_s,thrust_N,omega_rad_s,fixed_omega_thrust_N")?;
    for p in points {
        writeln!(
            out,
            "{},{},{},{}",
            sig9(p.inflow),
            sig9(p.coupled.thrust),
            sig9(p.coupled.omega),
            sig9(p.fixed_speed_thrust)
        )?;
    }
    Ok(())
}
