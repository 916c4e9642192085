//! Payload-maximizing wing design search.
//!
//! Six design variables (pitch, propeller mount radius, tip radius and the
//! three control chords) are searched with Nelder–Mead. Constraints are
//! handled with an additive penalty: any infeasible point scores below
//! [`INFEASIBLE_BASE`] and sinks further with the violation magnitude.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;

use crate::aero::wing_coefficients_at;
use crate::aero::REFERENCE_OMEGA;
use crate::error::{Error, Result};
use crate::geometry::WingGeometry;
use crate::nelder_mead::{self, NelderMeadOptions, Termination};
use crate::robot::Robot;
use crate::trim::{solve_trim_with, TrimState};

/// Largest allowed wing semi-span, m.
pub const MAX_TIP_RADIUS: f64 = 0.23;
/// Objective ceiling for infeasible designs, N (negated).
pub const INFEASIBLE_BASE: f64 = 1e3;
/// Penalty per metre or radian of constraint violation, N.
pub const DEFAULT_PENALTY_WEIGHT: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignVector {
    /// rad
    pub beta: f64,
    /// m
    pub r_m: f64,
    /// m
    pub r_tip: f64,
    /// m
    pub chords: [f64; 3],
}

impl DesignVector {
    pub fn to_array(self) -> [f64; 6] {
        [
            self.beta,
            self.r_m,
            self.r_tip,
            self.chords[0],
            self.chords[1],
            self.chords[2],
        ]
    }

    pub fn from_slice(x: &[f64]) -> Self {
        Self {
            beta: x[0],
            r_m: x[1],
            r_tip: x[2],
            chords: [x[3], x[4], x[5]],
        }
    }

    pub fn of_robot(robot: &Robot) -> Self {
        Self {
            beta: robot.geometry.pitch(),
            r_m: robot.r_m,
            r_tip: robot.geometry.tip_radius(),
            chords: robot.geometry.chords(),
        }
    }

    /// Copy of `base` carrying this design.
    pub fn apply_to(&self, base: &Robot) -> Result<Robot> {
        Ok(Robot {
            geometry: WingGeometry::new(self.beta, self.r_tip, self.chords)?,
            r_m: self.r_m,
            ..base.clone()
        })
    }

    /// Total constraint violation in metres and radians; zero iff feasible.
    pub fn violation(&self) -> f64 {
        let mut v = 0.0;
        v += (self.r_tip - self.r_m).max(0.0);
        v += (self.r_tip - MAX_TIP_RADIUS).max(0.0);
        v += (-self.r_tip).max(0.0);
        v += self.chords.iter().map(|c| (-c).max(0.0)).sum::<f64>();
        v += (-self.beta).max(0.0) + (self.beta - FRAC_PI_2).max(0.0);
        if self.beta == 0.0 || self.beta == FRAC_PI_2 || self.r_tip == 0.0 {
            v += f64::EPSILON;
        }
        if v == 0.0 {
            let g = WingGeometry::unchecked(self.beta, self.r_tip, self.chords);
            v += g.negative_chord_excursion();
        }
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.violation() == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerOptions {
    pub nelder_mead: NelderMeadOptions,
    pub penalty_weight: f64,
    /// Drive voltage the payload is evaluated at; `None` uses the motor maximum.
    pub voltage: Option<f64>,
    /// Fresh-simplex restarts allowed after the first convergence.
    pub max_restarts: usize,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            nelder_mead: NelderMeadOptions::default(),
            penalty_weight: DEFAULT_PENALTY_WEIGHT,
            voltage: None,
            max_restarts: 0,
        }
    }
}

/// Outcome of scoring one design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    /// Payload margin T_R − m g in N, or the penalized score.
    pub objective: f64,
    pub trim: Option<TrimState>,
}

/// Payload objective with all non-design parameters taken from `base`.
pub fn evaluate(x: &DesignVector, base: &Robot, options: &OptimizerOptions) -> Evaluation {
    let violation = x.violation();
    if violation > 0.0 {
        return Evaluation {
            objective: -INFEASIBLE_BASE - options.penalty_weight * violation,
            trim: None,
        };
    }
    let robot = match x.apply_to(base) {
        Ok(r) => r,
        Err(_) => {
            return Evaluation {
                objective: -INFEASIBLE_BASE,
                trim: None,
            }
        }
    };
    let weight = robot.weight();
    let voltage = options.voltage.unwrap_or(robot.motor.max_voltage);
    let wing = match wing_coefficients_at(
        &robot.geometry,
        &robot.aero,
        robot.station_count,
        REFERENCE_OMEGA,
        &robot.station_solver,
    ) {
        Ok(w) => w,
        Err(_) => {
            return Evaluation {
                objective: -INFEASIBLE_BASE,
                trim: None,
            }
        }
    };
    if wing.c_q == 0.0 {
        // no wing: no thrust and no drag
        return Evaluation {
            objective: -weight,
            trim: None,
        };
    }
    match solve_trim_with(voltage, &wing, &robot) {
        Ok(trim) => Evaluation {
            objective: trim.thrust - weight,
            trim: Some(trim),
        },
        Err(_) => Evaluation {
            objective: -INFEASIBLE_BASE,
            trim: None,
        },
    }
}

/// Objective value only.
pub fn objective(x: &DesignVector, base: &Robot, options: &OptimizerOptions) -> f64 {
    evaluate(x, base, options).objective
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationReport {
    pub best: DesignVector,
    pub objective: f64,
    pub trim_at_best: Option<TrimState>,
    pub iterations: usize,
    pub evaluations: usize,
    /// Best objective after each iteration.
    pub history: Vec<f64>,
    pub termination: Termination,
}

/// Initial simplex offsets: 5% of each value, at least 1 mm or 1°.
pub fn simplex_steps(seed: &DesignVector) -> [f64; 6] {
    let x = seed.to_array();
    let floors = [1f64.to_radians(), 1e-3, 1e-3, 1e-3, 1e-3, 1e-3];
    let mut steps = [0.0; 6];
    for i in 0..6 {
        steps[i] = (0.05 * x[i].abs()).max(floors[i]);
    }
    steps
}

/// Maximizes payload from a feasible seed.
pub fn optimize(seed: &DesignVector, base: &Robot, options: &OptimizerOptions) -> Result<OptimizationReport> {
    base.validate()?;
    if !seed.is_feasible() {
        return Err(Error::Infeasible(format!(
            "seed violates the design constraints by {:e}",
            seed.violation()
        )));
    }
    let cache: RefCell<HashMap<[u64; 6], f64>> = RefCell::new(HashMap::new());
    let cost = |x: &[f64]| {
        let key: [u64; 6] = std::array::from_fn(|i| x[i].to_bits());
        if let Some(v) = cache.borrow().get(&key) {
            return *v;
        }
        let v = -objective(&DesignVector::from_slice(x), base, options);
        cache.borrow_mut().insert(key, v);
        v
    };
    let steps = |x: &[f64]| simplex_steps(&DesignVector::from_slice(x)).to_vec();
    let min = nelder_mead::minimize_restarting(
        cost,
        &seed.to_array(),
        steps,
        &options.nelder_mead,
        options.max_restarts,
    );
    let x = min.x;
    let best = DesignVector::from_slice(&x);
    let eval = evaluate(&best, base, options);
    Ok(OptimizationReport {
        best,
        objective: eval.objective,
        trim_at_best: eval.trim,
        iterations: min.iterations,
        evaluations: min.evaluations,
        history: min.history.iter().map(|v| -v).collect(),
        termination: min.termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn design(beta_deg: f64, r_m: f64, r_tip: f64, c: [f64; 3]) -> DesignVector {
        DesignVector {
            beta: beta_deg.to_radians(),
            r_m,
            r_tip,
            chords: c,
        }
    }

    #[test]
    fn zero_chords_cost_only_weight() {
        let base = Robot::crazyflie_bench();
        let x = design(20.0, 0.2, 0.2, [0.0; 3]);
        let robot = x.apply_to(&base).unwrap();
        assert_eq!(objective(&x, &base, &Default::default()), -robot.weight());
    }

    #[test]
    fn infeasible_scores_below_feasible() {
        let base = Robot::crazyflie_bench();
        let opts = OptimizerOptions::default();
        let bad = design(20.0, 0.15, 0.2, [0.03, 0.05, 0.07]);
        assert!(!bad.is_feasible());
        let feasible = [
            design(20.0, 0.2, 0.2, [0.0; 3]),
            design(27.5, 0.2, 0.2, [0.03, 0.05, 0.07]),
            design(60.0, 0.23, 0.23, [0.3, 0.3, 0.3]),
        ];
        let worst_feasible = feasible
            .iter()
            .map(|x| objective(x, &base, &opts))
            .fold(f64::MAX, f64::min);
        assert!(objective(&bad, &base, &opts) < worst_feasible);
        let worse = design(20.0, 0.10, 0.2, [0.03, 0.05, 0.07]);
        assert!(objective(&worse, &base, &opts) < objective(&bad, &base, &opts));
    }

    #[test]
    fn constraint_checks() {
        assert!(!design(20.0, 0.25, 0.24, [0.03; 3]).is_feasible());
        assert!(!design(20.0, 0.2, 0.2, [-0.01, 0.03, 0.03]).is_feasible());
        assert!(!design(95.0, 0.2, 0.2, [0.03; 3]).is_feasible());
        // dips below zero between the root and the first interior knot
        assert!(!design(20.0, 0.2, 0.2, [0.0, 0.0, 0.2]).is_feasible());
        assert!(design(20.0, 0.2, 0.2, [0.03, 0.05, 0.07]).is_feasible());
    }

    #[test]
    fn infeasible_seed_is_rejected() {
        let base = Robot::crazyflie_bench();
        let bad = design(20.0, 0.1, 0.2, [0.03; 3]);
        assert!(matches!(
            optimize(&bad, &base, &Default::default()),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn simplex_step_floors() {
        let s = simplex_steps(&design(21.0, 0.2, 0.2, [0.0, 0.01, 0.05]));
        assert!((s[0] - 21f64.to_radians() * 0.05).abs() < 1e-15);
        assert!((s[1] - 0.01).abs() < 1e-15);
        assert_eq!(s[3], 1e-3);
        assert_eq!(s[4], 1e-3);
        assert!((s[5] - 0.0025).abs() < 1e-15);
    }
}
