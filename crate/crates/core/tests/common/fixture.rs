#![allow(dead_code)]

//! Synthetic calibration data generated from known coefficients.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use samara_core::aero::{wing_coefficients_at, StationSolver, DEFAULT_STATION_COUNT, REFERENCE_OMEGA};
use samara_core::calibration::Measurement;
use samara_core::config::RobotConfig;
use samara_core::model::AeroCoefficients;
use samara_core::robot::{design_to_si, OPTIMAL_DESIGN};
use samara_core::WingGeometry;

pub const TRUE_COEFFICIENTS: AeroCoefficients = AeroCoefficients {
    c_l1: 2.0,
    c_d0: 0.15,
    c_d1: 2.2,
    rho: 1.2,
};

pub const POINTS_PER_ROBOT: usize = 14;
pub const OMEGA_RANGE: (f64, f64) = (15.0, 45.0);
pub const NOISE_LEVEL: f64 = 0.03;
pub const NOISE_SEED: u64 = 1;

/// Geometry-only config text per robot id, in file units. Robots B and C
/// re-pitch the optimized wing; D spreads the same area over equal control
/// chords.
pub fn geometry_configs() -> Vec<(&'static str, String)> {
    let d = OPTIMAL_DESIGN;
    let text = |pitch: f64, chords: [f64; 3]| {
        format!(
            "[geometry]\npitch_deg = {pitch}\nr_tip_mm = {}\nc1_mm = {}\nc2_mm = {}\nc3_mm = {}\n",
            d[2], chords[0], chords[1], chords[2]
        )
    };
    let optimal = [d[3], d[4], d[5]];
    let si = design_to_si(d);
    let area = |c: [f64; 3]| WingGeometry::new(si[0], si[2], c).unwrap().wing_area();
    let equal = 1e3 * area([si[3], si[4], si[5]]) / area([1.0; 3]);
    vec![
        ("robot_a", text(d[0], optimal)),
        ("robot_b", text(11.0, optimal)),
        ("robot_c", text(40.0, optimal)),
        ("robot_d", text(21.0, [equal; 3])),
    ]
}

pub fn geometries() -> BTreeMap<String, WingGeometry> {
    geometry_configs()
        .into_iter()
        .map(|(id, text)| {
            let mut cfg = RobotConfig::from_profile("crazyflie-bench").unwrap();
            cfg.apply_str(&text, std::path::Path::new(id)).unwrap();
            (id.to_string(), cfg.to_robot().unwrap().geometry)
        })
        .collect()
}

/// 14 evenly spaced speeds per robot; thrust times `1 + noise·z`, z standard normal.
pub fn measurements(coeffs: &AeroCoefficients, noise: f64, seed: u64) -> Vec<Measurement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (id, g) in geometries() {
        let c_t = wing_coefficients_at(&g, coeffs, DEFAULT_STATION_COUNT, REFERENCE_OMEGA, &StationSolver::default())
            .unwrap()
            .c_t_r;
        for i in 0..POINTS_PER_ROBOT {
            let (lo, hi) = OMEGA_RANGE;
            let omega = lo + (hi - lo) * i as f64 / (POINTS_PER_ROBOT - 1) as f64;
            let z: f64 = StandardNormal.sample(&mut rng);
            out.push(Measurement {
                robot_id: id.clone(),
                omega,
                thrust: c_t * omega * omega * (1.0 + noise * z),
            });
        }
    }
    out
}
