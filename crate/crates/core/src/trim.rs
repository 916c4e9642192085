//! Hover trim: the revolving rate at which the propellers' yaw torque
//! cancels the wing drag torque.

use crate::aero::{wing_coefficients_at, WingAeroResult, REFERENCE_OMEGA};
use crate::error::{Error, Result};
use crate::propulsion::{solve_operating_point, PropellerState};
use crate::robot::Robot;

/// Upper bracket when the propellers never lose thrust, rad/s.
pub const OMEGA_CEILING: f64 = 200.0;
/// Lowest revolving rate accepted as spun up: one revolution per second.
pub const MIN_SPIN_RATE: f64 = std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrimState {
    /// V
    pub voltage: f64,
    /// rad/s
    pub omega_rev: f64,
    /// Total wing thrust, N.
    pub thrust: f64,
    /// Total wing drag torque, N·m.
    pub torque: f64,
    /// State of each of the two propellers.
    pub prop: PropellerState,
    /// Thrust minus weight, N.
    pub payload_margin: f64,
    pub c_t_r: f64,
    pub c_q: f64,
    pub gravity: f64,
}

impl TrimState {
    /// |2 R_m T_p − Q| / Q.
    pub fn torque_residual(&self, r_m: f64) -> f64 {
        (2.0 * r_m * self.prop.thrust - self.torque).abs() / self.torque
    }
}

/// Wing coefficients for the robot at its configured resolution.
pub fn robot_wing_coefficients(robot: &Robot) -> Result<WingAeroResult> {
    wing_coefficients_at(
        &robot.geometry,
        &robot.aero,
        robot.station_count,
        REFERENCE_OMEGA,
        &robot.station_solver,
    )
}

/// Trim at drive voltage `voltage`.
pub fn solve_trim(voltage: f64, robot: &Robot) -> Result<TrimState> {
    robot.validate()?;
    let wing = robot_wing_coefficients(robot)?;
    solve_trim_with(voltage, &wing, robot)
}

/// Net yaw torque `2 R_m T_p(U, Ω) − C_Q Ω²`. Operating-point failures count
/// as zero propeller thrust.
pub fn torque_imbalance(voltage: f64, omega: f64, c_q: f64, robot: &Robot) -> f64 {
    let thrust = propeller_at(voltage, omega, robot).map_or(0.0, |s| s.thrust);
    2.0 * robot.r_m * thrust - c_q * omega * omega
}

fn propeller_at(voltage: f64, omega: f64, robot: &Robot) -> Result<PropellerState> {
    solve_operating_point(
        voltage,
        omega * robot.r_m,
        &robot.propeller,
        &robot.motor,
        robot.aero.rho,
    )
}

/// Revolving rate beyond which the propellers no longer push, or [`OMEGA_CEILING`].
pub fn omega_upper_bound(voltage: f64, robot: &Robot) -> f64 {
    let pushes = |omega: f64| propeller_at(voltage, omega, robot).is_ok_and(|s| s.thrust > 0.0);
    if pushes(OMEGA_CEILING) {
        return OMEGA_CEILING;
    }
    let (mut lo, mut hi) = (0.0, OMEGA_CEILING);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if pushes(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Trim using precomputed wing coefficients.
pub fn solve_trim_with(voltage: f64, wing: &WingAeroResult, robot: &Robot) -> Result<TrimState> {
    if !(voltage > 0.0 && voltage <= robot.motor.max_voltage) {
        return Err(Error::invalid(
            "voltage",
            format!("must lie in (0, {}] V", robot.motor.max_voltage),
        ));
    }
    if !(wing.c_q > 0.0) {
        return Err(Error::invalid("geometry", "wing produces no drag torque"));
    }
    let f = |omega: f64| torque_imbalance(voltage, omega, wing.c_q, robot);
    let mut lo = MIN_SPIN_RATE;
    let mut hi = omega_upper_bound(voltage, robot);
    if hi <= lo || f(lo) <= 0.0 {
        return Err(Error::CannotSpinUp {
            voltage,
            reason: format!(
                "propeller torque cannot hold the wing above {MIN_SPIN_RATE} rad/s"
            ),
        });
    }
    if f(hi) >= 0.0 {
        return Err(Error::CannotSpinUp {
            voltage,
            reason: format!("no torque balance below {hi} rad/s"),
        });
    }
    while hi - lo > 1e-13 * hi {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let omega = if f(lo).abs() <= f(hi).abs() { lo } else { hi };
    let prop = propeller_at(voltage, omega, robot)?;
    let thrust = wing.c_t_r * omega * omega;
    let torque = wing.c_q * omega * omega;
    let state = TrimState {
        voltage,
        omega_rev: omega,
        thrust,
        torque,
        prop,
        payload_margin: thrust - robot.weight(),
        c_t_r: wing.c_t_r,
        c_q: wing.c_q,
        gravity: robot.environment.gravity,
    };
    let residual = (2.0 * robot.r_m * prop.thrust - torque).abs();
    if residual >= 1e-6 * torque {
        return Err(Error::CannotSpinUp {
            voltage,
            reason: format!("torque balance residual {residual:e} N*m too large"),
        });
    }
    Ok(state)
}

/// Trim at `steps` uniformly spaced voltages in `[u_min, u_max]`. Failures are
/// reported per point.
pub fn voltage_sweep(
    u_min: f64,
    u_max: f64,
    steps: usize,
    robot: &Robot,
) -> Result<Vec<(f64, Result<TrimState>)>> {
    if steps < 2 {
        return Err(Error::invalid("steps", "need at least two voltages"));
    }
    if !(u_min > 0.0 && u_min < u_max && u_max <= robot.motor.max_voltage) {
        return Err(Error::invalid(
            "voltage",
            format!("need 0 < v_min < v_max <= {} V", robot.motor.max_voltage),
        ));
    }
    robot.validate()?;
    let wing = robot_wing_coefficients(robot)?;
    Ok((0..steps)
        .map(|i| {
            let u = if i == steps - 1 {
                u_max
            } else {
                u_min + (u_max - u_min) * i as f64 / (steps - 1) as f64
            };
            (u, solve_trim_with(u, &wing, robot))
        })
        .collect())
}
