//! Hover analysis and design tools for samara-inspired revolving-wing robots.
//!
//! A pair of flat wings revolves about the vertical axis, driven by two
//! horizontally mounted propellers at radius `R_m`. The crate predicts the
//! hover thrust for a drive voltage, optimizes the wing planform for payload,
//! and refits the wing lift/drag coefficients from bench measurements.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aero;
pub mod calibration;
pub mod config;
pub mod error;
pub mod geometry;
pub mod model;
pub mod nelder_mead;
pub mod optimizer;
pub mod propulsion;
pub mod report;
pub mod robot;
pub mod spline;
pub mod trim;

pub use aero::{solve_station, wing_coefficients, StationSolution, WingAeroResult};
pub use error::{Error, Result};
pub use geometry::{robot_mass, MassModel, WingGeometry};
pub use model::{AeroCoefficients, Environment, MotorParams, PropellerParams};
pub use propulsion::{induced_velocity, propeller_torque, solve_operating_point, thrust_map, PropellerState};
pub use robot::Robot;
pub use trim::{solve_trim, voltage_sweep, TrimState};
