//! Physical parameter sets and the flat-plate lift/drag model.
//!
//! Everything in here is strict SI: metres, kilograms, seconds, radians,
//! volts and ohms. Conversions from millimetres, grams and degrees happen in
//! [`crate::config`] only.

use crate::error::{Error, Result};

/// Standard gravity, m/s².
pub const STANDARD_GRAVITY: f64 = 9.81;

/// Quasi-steady flat-plate coefficients and the air density they act in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AeroCoefficients {
    pub c_l1: f64,
    pub c_d0: f64,
    pub c_d1: f64,
    /// kg/m³
    pub rho: f64,
}

impl AeroCoefficients {
    pub fn new(c_l1: f64, c_d0: f64, c_d1: f64, rho: f64) -> Result<Self> {
        let coeffs = Self {
            c_l1,
            c_d0,
            c_d1,
            rho,
        };
        coeffs.validate()?;
        Ok(coeffs)
    }

    /// Literature values used before any bench data is available.
    pub const fn pre_fit() -> Self {
        Self {
            c_l1: 1.72,
            c_d0: 0.11,
            c_d1: 1.94,
            rho: 1.2,
        }
    }

    /// Values refitted against the four-robot thrust measurements.
    pub const fn bench_refit() -> Self {
        Self {
            c_l1: 2.67,
            c_d0: 0.22,
            c_d1: 2.58,
            rho: 1.2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) {
            return Err(Error::invalid("rho", "air density must be positive"));
        }
        if !(self.c_l1 > 0.0) {
            return Err(Error::invalid("c_l1", "lift amplitude must be positive"));
        }
        if !(self.c_d0 >= 0.0) {
            return Err(Error::invalid("c_d0", "must be non-negative"));
        }
        if !(self.c_d1 >= 0.0) {
            return Err(Error::invalid("c_d1", "must be non-negative"));
        }
        Ok(())
    }

    /// Lift coefficient `c_l1 · sin 2α`.
    pub fn lift_coefficient(&self, alpha: f64) -> f64 {
        self.c_l1 * (2.0 * alpha).sin()
    }

    /// Drag coefficient `c_d0 + c_d1 · (1 − cos 2α)`.
    pub fn drag_coefficient(&self, alpha: f64) -> f64 {
        self.c_d0 + self.c_d1 * (1.0 - (2.0 * alpha).cos())
    }
}

impl Default for AeroCoefficients {
    fn default() -> Self {
        Self::pre_fit()
    }
}

/// Free function form of [`AeroCoefficients::lift_coefficient`].
pub fn lift_coefficient(alpha: f64, coeffs: &AeroCoefficients) -> f64 {
    coeffs.lift_coefficient(alpha)
}

/// Free function form of [`AeroCoefficients::drag_coefficient`].
pub fn drag_coefficient(alpha: f64, coeffs: &AeroCoefficients) -> f64 {
    coeffs.drag_coefficient(alpha)
}

/// First-order brushed DC motor. The armature current is eliminated
/// analytically, so it has no field here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotorParams {
    /// Ω
    pub resistance: f64,
    /// V·s/rad
    pub back_emf: f64,
    /// V
    pub max_voltage: f64,
}

impl MotorParams {
    pub const fn crazyflie() -> Self {
        Self {
            resistance: 1.58,
            back_emf: 1.1e-3,
            max_voltage: 3.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.resistance > 0.0) {
            return Err(Error::invalid("resistance", "must be positive"));
        }
        if !(self.back_emf > 0.0) {
            return Err(Error::invalid("back_emf", "must be positive"));
        }
        if !(self.max_voltage > 0.0) {
            return Err(Error::invalid("max_voltage", "must be positive"));
        }
        Ok(())
    }

    /// No-load spin rate `U / k`.
    pub fn no_load_speed(&self, voltage: f64) -> f64 {
        voltage / self.back_emf
    }

    /// Shaft torque delivered at spin rate `omega`: `(k / R)(U − kω)`.
    pub fn torque(&self, voltage: f64, omega: f64) -> f64 {
        self.back_emf / self.resistance * (voltage - self.back_emf * omega)
    }
}

/// Lumped-coefficient propeller model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropellerParams {
    /// m
    pub radius: f64,
    pub blade_count: u32,
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    /// Induced power factor.
    pub kappa: f64,
}

impl PropellerParams {
    pub const fn crazyflie() -> Self {
        Self {
            radius: 0.023,
            blade_count: 2,
            a0: 0.3633,
            a1: 1.9960,
            a2: 0.0022,
            kappa: 1.87,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) {
            return Err(Error::invalid("prop_radius", "must be positive"));
        }
        if self.blade_count < 1 {
            return Err(Error::invalid("blade_count", "need at least one blade"));
        }
        if !(self.a0 > 0.0) {
            return Err(Error::invalid("a0", "must be positive"));
        }
        if !(self.a1 >= 0.0) {
            return Err(Error::invalid("a1", "must be non-negative"));
        }
        if !(self.a2 >= 0.0) {
            return Err(Error::invalid("a2", "must be non-negative"));
        }
        if !(self.kappa >= 1.0) {
            return Err(Error::invalid("kappa", "induced power factor must be >= 1"));
        }
        Ok(())
    }
}

/// Ambient conditions. Only hover (zero free stream) is supported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Environment {
    /// m/s²
    pub gravity: f64,
    /// m/s, downward
    pub free_stream: f64,
}

impl Environment {
    pub fn validate(&self) -> Result<()> {
        if !(self.gravity > 0.0) {
            return Err(Error::invalid("gravity", "must be positive"));
        }
        if self.free_stream != 0.0 {
            return Err(Error::invalid(
                "free_stream",
                "only hover (zero free stream) is supported",
            ));
        }
        Ok(())
    }
}

impl Default for Environment {
    fn default() -> Self {
        Self {
            gravity: STANDARD_GRAVITY,
            free_stream: 0.0,
        }
    }
}
