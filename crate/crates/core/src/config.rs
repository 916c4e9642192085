//! Robot configuration files.
//!
//! Flat `key = value` text with `[section]` headers. Every dimensional key
//! carries its unit in the name (`r_tip_mm`, `pitch_deg`, ...). A file only
//! needs the keys it overrides; everything else comes from the base profile.
//! Values are stored in file units so that writing and re-reading a config is
//! exact.
//!
//! ```text
//! [geometry]
//! pitch_deg = 27.5
//! r_tip_mm = 200
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::aero::StationSolver;
use crate::error::{Error, Result};
use crate::geometry::{MassModel, WingGeometry};
use crate::model::{AeroCoefficients, Environment, MotorParams, PropellerParams};
use crate::optimizer::DesignVector;
use crate::robot::Robot;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Real,
    Count,
}

struct KeySpec {
    section: &'static str,
    key: &'static str,
    kind: Kind,
}

const fn real(section: &'static str, key: &'static str) -> KeySpec {
    KeySpec {
        section,
        key,
        kind: Kind::Real,
    }
}

const fn count(section: &'static str, key: &'static str) -> KeySpec {
    KeySpec {
        section,
        key,
        kind: Kind::Count,
    }
}

const KEYS: &[KeySpec] = &[
    real("geometry", "pitch_deg"),
    real("geometry", "r_tip_mm"),
    real("geometry", "c1_mm"),
    real("geometry", "c2_mm"),
    real("geometry", "c3_mm"),
    real("propulsion", "mount_radius_mm"),
    real("propulsion", "prop_radius_mm"),
    count("propulsion", "blade_count"),
    real("propulsion", "a0"),
    real("propulsion", "a1"),
    real("propulsion", "a2"),
    real("propulsion", "kappa"),
    real("propulsion", "resistance_ohm"),
    real("propulsion", "back_emf_mv_s_per_rad"),
    real("propulsion", "max_voltage_v"),
    real("mass", "rod_density_g_per_m"),
    real("mass", "wing_density_g_per_m2"),
    real("mass", "fixed_mass_g"),
    real("aero", "c_l1"),
    real("aero", "c_d0"),
    real("aero", "c_d1"),
    real("aero", "rho_kg_per_m3"),
    real("environment", "gravity_m_per_s2"),
    real("environment", "free_stream_m_per_s"),
    count("solver", "station_count"),
    real("solver", "station_tolerance"),
    count("solver", "station_max_iterations"),
];

fn spec(section: &str, key: &str) -> Option<&'static KeySpec> {
    KEYS.iter().find(|k| k.section == section && k.key == key)
}

/// Sections a file may contain.
pub const SECTIONS: &[&str] = &["geometry", "propulsion", "mass", "aero", "environment", "solver"];

/// Full set of configuration values, in file units.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotConfig {
    values: BTreeMap<(&'static str, &'static str), f64>,
}

impl RobotConfig {
    /// Config holding every value of `robot`.
    pub fn from_robot(robot: &Robot) -> Self {
        let g = &robot.geometry;
        let [c1, c2, c3] = g.chords();
        let p = &robot.propeller;
        let m = &robot.motor;
        let entries = [
            g.pitch().to_degrees(),
            g.tip_radius() * 1e3,
            c1 * 1e3,
            c2 * 1e3,
            c3 * 1e3,
            robot.r_m * 1e3,
            p.radius * 1e3,
            p.blade_count as f64,
            p.a0,
            p.a1,
            p.a2,
            p.kappa,
            m.resistance,
            m.back_emf * 1e3,
            m.max_voltage,
            robot.mass.rod_linear_density * 1e3,
            robot.mass.wing_areal_density * 1e3,
            robot.mass.fixed_mass * 1e3,
            robot.aero.c_l1,
            robot.aero.c_d0,
            robot.aero.c_d1,
            robot.aero.rho,
            robot.environment.gravity,
            robot.environment.free_stream,
            robot.station_count as f64,
            robot.station_solver.tolerance,
            robot.station_solver.max_iterations as f64,
        ];
        let values = KEYS
            .iter()
            .zip(entries)
            .map(|(k, v)| ((k.section, k.key), v))
            .collect();
        Self { values }
    }

    pub fn from_profile(name: &str) -> Result<Self> {
        Ok(Self::from_robot(&Robot::profile(name)?))
    }

    pub fn get(&self, section: &str, key: &str) -> Option<f64> {
        let spec = spec(section, key)?;
        self.values.get(&(spec.section, spec.key)).copied()
    }

    fn value(&self, section: &'static str, key: &'static str) -> f64 {
        self.values[&(section, key)]
    }

    /// Sets one key; unknown keys and non-integral counts are rejected.
    pub fn set(&mut self, section: &str, key: &str, value: f64) -> Result<()> {
        let spec = spec(section, key).ok_or_else(|| {
            Error::invalid("config", format!("unknown key `{key}` in section [{section}]"))
        })?;
        check_value(spec, value).map_err(|m| Error::invalid("config", m))?;
        self.values.insert((spec.section, spec.key), value);
        Ok(())
    }

    /// Applies the keys in `text` on top of the current values.
    pub fn apply_str(&mut self, text: &str, origin: &Path) -> Result<()> {
        let err = |line: usize, message: String| Error::Config {
            path: origin.to_path_buf(),
            line,
            message,
        };
        let mut section: Option<&'static str> = None;
        let mut seen = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| err(line_no, format!("malformed section header `{line}`")))?
                    .trim();
                section = Some(
                    SECTIONS
                        .iter()
                        .copied()
                        .find(|s| *s == name)
                        .ok_or_else(|| err(line_no, format!("unknown section [{name}]")))?,
                );
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(line_no, format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let sec = section.ok_or_else(|| err(line_no, format!("key `{key}` outside any section")))?;
            let spec = spec(sec, key)
                .ok_or_else(|| err(line_no, format!("unknown key `{key}` in section [{sec}]")))?;
            let parsed: f64 = value
                .parse()
                .map_err(|_| err(line_no, format!("`{key}`: cannot parse `{value}` as a number")))?;
            check_value(spec, parsed).map_err(|m| err(line_no, m))?;
            if let Some(prev) = seen.insert((spec.section, spec.key), line_no) {
                return Err(err(line_no, format!("`{key}` already set on line {prev}")));
            }
            self.values.insert((spec.section, spec.key), parsed);
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
            path: path.to_path_buf(),
            line: 0,
            message: e.to_string(),
        })?;
        self.apply_str(&text, path)
    }

    /// Profile `profile` overlaid with each file in order.
    pub fn load(profile: &str, files: &[PathBuf]) -> Result<Self> {
        let mut cfg = Self::from_profile(profile)?;
        for f in files {
            cfg.apply_file(f)?;
        }
        Ok(cfg)
    }

    /// Full config text with every key.
    pub fn to_text(&self) -> String {
        self.sections_text(SECTIONS)
    }

    /// Text for the listed sections only.
    pub fn sections_text(&self, sections: &[&str]) -> String {
        let mut out = String::new();
        for (i, sec) in sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            writeln!(out, "[{sec}]").unwrap();
            for k in KEYS.iter().filter(|k| k.section == *sec) {
                let v = self.values[&(k.section, k.key)];
                match k.kind {
                    Kind::Count => writeln!(out, "{} = {}", k.key, v as u64).unwrap(),
                    Kind::Real => writeln!(out, "{} = {}", k.key, v).unwrap(),
                }
            }
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    /// Converts to SI and validates every parameter.
    pub fn to_robot(&self) -> Result<Robot> {
        let v = |s, k| self.value(s, k);
        let geometry = WingGeometry::new(
            v("geometry", "pitch_deg").to_radians(),
            v("geometry", "r_tip_mm") / 1e3,
            [
                v("geometry", "c1_mm") / 1e3,
                v("geometry", "c2_mm") / 1e3,
                v("geometry", "c3_mm") / 1e3,
            ],
        )?;
        let robot = Robot {
            geometry,
            r_m: v("propulsion", "mount_radius_mm") / 1e3,
            aero: AeroCoefficients {
                c_l1: v("aero", "c_l1"),
                c_d0: v("aero", "c_d0"),
                c_d1: v("aero", "c_d1"),
                rho: v("aero", "rho_kg_per_m3"),
            },
            propeller: PropellerParams {
                radius: v("propulsion", "prop_radius_mm") / 1e3,
                blade_count: v("propulsion", "blade_count") as u32,
                a0: v("propulsion", "a0"),
                a1: v("propulsion", "a1"),
                a2: v("propulsion", "a2"),
                kappa: v("propulsion", "kappa"),
            },
            motor: MotorParams {
                resistance: v("propulsion", "resistance_ohm"),
                back_emf: v("propulsion", "back_emf_mv_s_per_rad") / 1e3,
                max_voltage: v("propulsion", "max_voltage_v"),
            },
            mass: MassModel {
                rod_linear_density: v("mass", "rod_density_g_per_m") / 1e3,
                wing_areal_density: v("mass", "wing_density_g_per_m2") / 1e3,
                fixed_mass: v("mass", "fixed_mass_g") / 1e3,
            },
            environment: Environment {
                gravity: v("environment", "gravity_m_per_s2"),
                free_stream: v("environment", "free_stream_m_per_s"),
            },
            station_count: v("solver", "station_count") as usize,
            station_solver: StationSolver {
                tolerance: v("solver", "station_tolerance"),
                max_iterations: v("solver", "station_max_iterations") as usize,
                ..StationSolver::default()
            },
        };
        robot.validate()?;
        Ok(robot)
    }

    /// Replaces the six design keys with `design`, rounded through file units.
    pub fn set_design(&mut self, design: &DesignVector) {
        let entries = [
            ("geometry", "pitch_deg", design.beta.to_degrees()),
            ("geometry", "r_tip_mm", design.r_tip * 1e3),
            ("geometry", "c1_mm", design.chords[0] * 1e3),
            ("geometry", "c2_mm", design.chords[1] * 1e3),
            ("geometry", "c3_mm", design.chords[2] * 1e3),
            ("propulsion", "mount_radius_mm", design.r_m * 1e3),
        ];
        for (s, k, v) in entries {
            self.values.insert((s, k), v);
        }
    }

    /// Replaces the aerodynamic coefficients.
    pub fn set_aero(&mut self, aero: &AeroCoefficients) {
        self.values.insert(("aero", "c_l1"), aero.c_l1);
        self.values.insert(("aero", "c_d0"), aero.c_d0);
        self.values.insert(("aero", "c_d1"), aero.c_d1);
        self.values.insert(("aero", "rho_kg_per_m3"), aero.rho);
    }
}

fn check_value(spec: &KeySpec, value: f64) -> std::result::Result<(), String> {
    if !value.is_finite() {
        return Err(format!("`{}` must be finite", spec.key));
    }
    if spec.kind == Kind::Count && (value < 0.0 || value.fract() != 0.0) {
        return Err(format!("`{}` must be a non-negative integer", spec.key));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn profile_round_trips_through_robot() {
        let robot = Robot::crazyflie_bench();
        let cfg = RobotConfig::from_robot(&robot);
        let back = cfg.to_robot().unwrap();
        assert_eq!(RobotConfig::from_robot(&back), cfg);
        assert!((back.r_m - robot.r_m).abs() < 1e-15);
        assert!((back.motor.back_emf - 1.1e-3).abs() < 1e-18);
    }

    #[test]
    fn overlay_and_errors() {
        let mut cfg = RobotConfig::from_profile("crazyflie-bench").unwrap();
        let p = Path::new("test.cfg");
        cfg.apply_str("# c\n[geometry]\npitch_deg = 30 # trailing\n", p).unwrap();
        assert_eq!(cfg.get("geometry", "pitch_deg"), Some(30.0));

        let e = cfg.apply_str("[geometry]\npitch = 30\n", p).unwrap_err();
        assert!(matches!(e, Error::Config { line: 2, .. }), "{e}");
        assert!(cfg.apply_str("[wings]\n", p).is_err());
        assert!(cfg.apply_str("pitch_deg = 3\n", p).is_err());
        assert!(cfg.apply_str("[geometry]\npitch_deg = abc\n", p).is_err());
        assert!(cfg.apply_str("[solver]\nstation_count = 12.5\n", p).is_err());
        assert!(cfg.apply_str("[aero]\nc_l1 = 1\nc_l1 = 2\n", p).is_err());
    }

    #[test]
    fn invalid_values_fail_on_conversion() {
        let mut cfg = RobotConfig::from_profile("crazyflie-bench").unwrap();
        cfg.set("environment", "free_stream_m_per_s", 2.0).unwrap();
        assert!(cfg.to_robot().is_err());
        assert!(cfg.set("environment", "wind", 2.0).is_err());
    }

    proptest! {
        #[test]
        fn writer_then_parser_is_identity(
            pitch in 1.0f64..89.0,
            tip in 50.0f64..230.0,
            c in proptest::array::uniform3(0.0f64..300.0),
            cl in 0.1f64..5.0,
            stations in 16u32..1024,
        ) {
            let mut cfg = RobotConfig::from_profile("crazyflie-bench").unwrap();
            cfg.set("geometry", "pitch_deg", pitch).unwrap();
            cfg.set("geometry", "r_tip_mm", tip).unwrap();
            cfg.set("geometry", "c1_mm", c[0]).unwrap();
            cfg.set("geometry", "c2_mm", c[1]).unwrap();
            cfg.set("geometry", "c3_mm", c[2]).unwrap();
            cfg.set("aero", "c_l1", cl).unwrap();
            cfg.set("solver", "station_count", stations as f64).unwrap();
            let mut back = RobotConfig::from_profile("rectangular-seed").unwrap();
            back.apply_str(&cfg.to_text(), Path::new("mem")).unwrap();
            prop_assert_eq!(back, cfg);
        }
    }
}
