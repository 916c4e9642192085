//! A complete robot description and the built-in parameter profiles.

use crate::aero::{StationSolver, DEFAULT_STATION_COUNT};
use crate::error::{Error, Result};
use crate::geometry::{robot_mass, MassModel, WingGeometry};
use crate::model::{AeroCoefficients, Environment, MotorParams, PropellerParams};

/// Name of the built-in bench parameter profile.
pub const CRAZYFLIE_BENCH: &str = "crazyflie-bench";
/// Name of the rectangular-wing optimization seed profile.
pub const RECTANGULAR_SEED: &str = "rectangular-seed";

/// Total mass of the fabricated optimal robot, kg.
pub const REFERENCE_ROBOT_MASS: f64 = 0.0138;

/// Design produced by `optimize` from the rectangular seed with the bench
/// parameters, in file units: pitch °, mount radius mm, tip radius mm, c1–c3 mm.
pub const OPTIMAL_DESIGN: [f64; 6] = [
    24.86266611766875,
    197.7755099950785,
    197.77550207968508,
    8.109755949633199,
    23.627301373503897,
    135.14430349055158,
];

/// Rectangular wing at 21° pitch, the optimization seed (file units).
pub const RECTANGULAR_DESIGN: [f64; 6] = [21.0, 200.0, 200.0, 50.0, 50.0, 50.0];

/// Converts a design in file units to (pitch rad, r_m m, r_tip m, c1–c3 m),
/// exactly as the config reader does.
pub fn design_to_si(design: [f64; 6]) -> [f64; 6] {
    [
        design[0].to_radians(),
        design[1] / 1e3,
        design[2] / 1e3,
        design[3] / 1e3,
        design[4] / 1e3,
        design[5] / 1e3,
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct Robot {
    pub geometry: WingGeometry,
    /// Propeller mounting radius, m.
    pub r_m: f64,
    pub aero: AeroCoefficients,
    pub propeller: PropellerParams,
    pub motor: MotorParams,
    pub mass: MassModel,
    pub environment: Environment,
    pub station_count: usize,
    pub station_solver: StationSolver,
}

impl Robot {
    /// Bench parameters with the optimized wing.
    pub fn crazyflie_bench() -> Self {
        Self::with_design(OPTIMAL_DESIGN)
    }

    /// Bench parameters with the rectangular seed wing.
    pub fn rectangular_seed() -> Self {
        Self::with_design(RECTANGULAR_DESIGN)
    }

    pub fn profile(name: &str) -> Result<Self> {
        match name {
            CRAZYFLIE_BENCH => Ok(Self::crazyflie_bench()),
            RECTANGULAR_SEED => Ok(Self::rectangular_seed()),
            other => Err(Error::invalid(
                "profile",
                format!("unknown profile `{other}` (expected `{CRAZYFLIE_BENCH}` or `{RECTANGULAR_SEED}`)"),
            )),
        }
    }

    fn with_design(design: [f64; 6]) -> Self {
        let design = design_to_si(design);
        let geometry = WingGeometry::new(design[0], design[2], [design[3], design[4], design[5]])
            .expect("built-in design is valid");
        Self {
            geometry,
            r_m: design[1],
            aero: AeroCoefficients::pre_fit(),
            propeller: PropellerParams::crazyflie(),
            motor: MotorParams::crazyflie(),
            mass: MassModel {
                rod_linear_density: 4.7e-3,
                wing_areal_density: 92.6e-3,
                fixed_mass: default_fixed_mass(),
            },
            environment: Environment::default(),
            station_count: DEFAULT_STATION_COUNT,
            station_solver: StationSolver::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.aero.validate()?;
        self.propeller.validate()?;
        self.motor.validate()?;
        self.mass.validate()?;
        self.environment.validate()?;
        if !(self.r_m > 0.0) {
            return Err(Error::invalid("r_m", "must be positive"));
        }
        if self.station_count < crate::aero::MIN_STATION_COUNT {
            return Err(Error::invalid("station_count", "need at least 16 stations"));
        }
        Ok(())
    }

    pub fn mass(&self) -> f64 {
        robot_mass(&self.geometry, &self.mass, self.r_m)
    }

    pub fn weight(&self) -> f64 {
        self.mass() * self.environment.gravity
    }
}

/// Fixed (non-design) mass that makes the optimal design weigh 13.8 g.
pub fn default_fixed_mass() -> f64 {
    let design = design_to_si(OPTIMAL_DESIGN);
    let geometry = WingGeometry::new(design[0], design[2], [design[3], design[4], design[5]])
    .expect("built-in design is valid");
    let densities = MassModel {
        rod_linear_density: 4.7e-3,
        wing_areal_density: 92.6e-3,
        fixed_mass: 0.0,
    };
    densities.fixed_mass_for_total(&geometry, design[1], REFERENCE_ROBOT_MASS)
}
