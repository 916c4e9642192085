//! Refitting the wing lift/drag coefficients from bench thrust measurements.
//!
//! Each record is a measured revolving speed and thrust for one robot. The
//! prediction uses the measured speed directly, `T = C_T,R(geometry) Ω²`, so
//! the motor and propeller parameters stay out of the fit.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::Path;

use crate::aero::{wing_coefficients_at, StationSolver, DEFAULT_STATION_COUNT, REFERENCE_OMEGA};
use crate::config::RobotConfig;
use crate::error::{Error, Result};
use crate::geometry::WingGeometry;
use crate::model::AeroCoefficients;
use crate::nelder_mead::{self, NelderMeadOptions, Termination};
use crate::report::sig9;

pub const MEASUREMENT_HEADER: [&str; 3] = ["robot_id", "omega_rad_s", "thrust_mN"];

#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub robot_id: String,
    /// rad/s
    pub omega: f64,
    /// N
    pub thrust: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    records: Vec<Measurement>,
    geometries: BTreeMap<String, WingGeometry>,
}

impl MeasurementSet {
    /// Checks that every record resolves to a geometry and is physical.
    /// Records are kept in a canonical order so the fit does not depend on
    /// input order.
    pub fn new(mut records: Vec<Measurement>, geometries: BTreeMap<String, WingGeometry>) -> Result<Self> {
        for r in &records {
            if !geometries.contains_key(&r.robot_id) {
                return Err(Error::Measurement(format!(
                    "no geometry registered for robot_id `{}`",
                    r.robot_id
                )));
            }
            if !(r.omega > 0.0 && r.omega.is_finite()) {
                return Err(Error::Measurement(format!(
                    "robot `{}`: revolving speed must be positive, got {}",
                    r.robot_id, r.omega
                )));
            }
            if !(r.thrust > 0.0 && r.thrust.is_finite()) {
                return Err(Error::Measurement(format!(
                    "robot `{}`: thrust must be positive, got {}",
                    r.robot_id, r.thrust
                )));
            }
        }
        records.sort_by(|a, b| {
            a.robot_id
                .cmp(&b.robot_id)
                .then(a.omega.total_cmp(&b.omega))
                .then(a.thrust.total_cmp(&b.thrust))
        });
        Ok(Self { records, geometries })
    }

    pub fn records(&self) -> &[Measurement] {
        &self.records
    }

    pub fn geometries(&self) -> &BTreeMap<String, WingGeometry> {
        &self.geometries
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Reads `robot_id,omega_rad_s,thrust_mN` rows; thrust is converted to N.
pub fn read_measurements_csv(path: &Path) -> Result<Vec<Measurement>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != MEASUREMENT_HEADER {
        return Err(Error::Measurement(format!(
            "{}: expected header `{}`, found `{}`",
            path.display(),
            MEASUREMENT_HEADER.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row?;
        let field = |j: usize| -> Result<f64> {
            row[j].parse().map_err(|_| {
                Error::Measurement(format!(
                    "{} row {}: cannot parse `{}` as {}",
                    path.display(),
                    i + 2,
                    &row[j],
                    MEASUREMENT_HEADER[j]
                ))
            })
        };
        records.push(Measurement {
            robot_id: row[0].to_string(),
            omega: field(1)?,
            thrust: field(2)? / 1e3,
        });
    }
    Ok(records)
}

/// Loads `<robot_id>.cfg` from `dir` for every id referenced by `records`,
/// each overlaid on `base`.
pub fn load_geometry_registry(
    dir: &Path,
    base: &RobotConfig,
    records: &[Measurement],
) -> Result<BTreeMap<String, WingGeometry>> {
    let mut out = BTreeMap::new();
    for r in records {
        if out.contains_key(&r.robot_id) {
            continue;
        }
        let path = dir.join(format!("{}.cfg", r.robot_id));
        if !path.is_file() {
            return Err(Error::Measurement(format!(
                "robot_id `{}` has no geometry file {}",
                r.robot_id,
                path.display()
            )));
        }
        let mut cfg = base.clone();
        cfg.apply_file(&path)?;
        out.insert(r.robot_id.clone(), cfg.to_robot()?.geometry);
    }
    Ok(out)
}

/// Thrust at the measured revolving speed.
pub fn predict_thrust_at_speed(
    geometry: &WingGeometry,
    coeffs: &AeroCoefficients,
    omega: f64,
    station_count: usize,
) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::invalid("omega_rev", "must be positive"));
    }
    let wing = wing_coefficients_at(
        geometry,
        coeffs,
        station_count,
        REFERENCE_OMEGA,
        &StationSolver::default(),
    )?;
    Ok(wing.c_t_r * omega * omega)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub station_count: usize,
    pub solver: StationSolver,
    pub nelder_mead: NelderMeadOptions,
    pub max_restarts: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            station_count: DEFAULT_STATION_COUNT,
            solver: StationSolver::default(),
            nelder_mead: NelderMeadOptions {
                f_tolerance: 1e-12,
                max_evaluations: 3000,
                ..NelderMeadOptions::default()
            },
            max_restarts: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub coefficients: AeroCoefficients,
    /// N
    pub rms_error: f64,
    pub initial_rms_error: f64,
    pub per_robot_rms: BTreeMap<String, f64>,
    pub datapoints_used: usize,
    pub evaluations: usize,
    pub termination: Termination,
}

/// Thrust coefficients per robot for one coefficient set, memoized.
struct ThrustCoefficients<'a> {
    data: &'a MeasurementSet,
    options: &'a FitOptions,
    cache: RefCell<HashMap<(String, [u64; 4]), f64>>,
}

impl ThrustCoefficients<'_> {
    fn get(&self, id: &str, coeffs: &AeroCoefficients) -> Result<f64> {
        let key = (
            id.to_string(),
            [coeffs.c_l1, coeffs.c_d0, coeffs.c_d1, coeffs.rho].map(f64::to_bits),
        );
        if let Some(v) = self.cache.borrow().get(&key) {
            return Ok(*v);
        }
        let wing = wing_coefficients_at(
            &self.data.geometries[id],
            coeffs,
            self.options.station_count,
            REFERENCE_OMEGA,
            &self.options.solver,
        )?;
        self.cache.borrow_mut().insert(key, wing.c_t_r);
        Ok(wing.c_t_r)
    }

    /// Overall and per-robot RMS thrust error, N.
    fn rms(&self, coeffs: &AeroCoefficients) -> Result<(f64, BTreeMap<String, f64>)> {
        let mut total = 0.0;
        let mut per_robot: BTreeMap<String, (f64, usize)> = BTreeMap::new();
        for r in &self.data.records {
            let predicted = self.get(&r.robot_id, coeffs)? * r.omega * r.omega;
            let sq = (predicted - r.thrust).powi(2);
            total += sq;
            let e = per_robot.entry(r.robot_id.clone()).or_default();
            e.0 += sq;
            e.1 += 1;
        }
        let n = self.data.records.len() as f64;
        Ok((
            (total / n).sqrt(),
            per_robot
                .into_iter()
                .map(|(k, (s, c))| (k, (s / c as f64).sqrt()))
                .collect(),
        ))
    }
}

/// RMS thrust error of `coeffs` against the data, N.
pub fn rms_error(data: &MeasurementSet, coeffs: &AeroCoefficients, options: &FitOptions) -> Result<f64> {
    let tc = ThrustCoefficients {
        data,
        options,
        cache: RefCell::new(HashMap::new()),
    };
    Ok(tc.rms(coeffs)?.0)
}

fn coefficient_violation(x: &[f64]) -> f64 {
    let v = (-x[0]).max(0.0) + (-x[1]).max(0.0) + (-x[2]).max(0.0);
    if x[0] == 0.0 {
        v + f64::EPSILON
    } else {
        v
    }
}

/// Minimizes the RMS thrust error over (c_l1, c_d0, c_d1); air density is
/// kept from `initial`.
pub fn fit(data: &MeasurementSet, initial: &AeroCoefficients, options: &FitOptions) -> Result<FitResult> {
    initial.validate()?;
    if data.len() < 3 {
        return Err(Error::IllPosedFit(format!(
            "need at least 3 datapoints for 3 coefficients, got {}",
            data.len()
        )));
    }
    let first = &data.records[0];
    if data
        .records
        .iter()
        .all(|r| r.robot_id == first.robot_id && r.omega == first.omega)
    {
        return Err(Error::IllPosedFit(
            "all datapoints share one robot and one revolving speed".to_string(),
        ));
    }
    let tc = ThrustCoefficients {
        data,
        options,
        cache: RefCell::new(HashMap::new()),
    };
    let initial_rms = tc.rms(initial)?.0;
    let rho = initial.rho;
    let cost = |x: &[f64]| {
        let violation = coefficient_violation(x);
        if violation > 0.0 {
            return 1e6 * (1.0 + violation);
        }
        let coeffs = AeroCoefficients {
            c_l1: x[0],
            c_d0: x[1],
            c_d1: x[2],
            rho,
        };
        tc.rms(&coeffs).map_or(f64::INFINITY, |(rms, _)| rms)
    };
    let steps = |x: &[f64]| x.iter().map(|v| (0.1 * v.abs()).max(0.01)).collect();
    let min = nelder_mead::minimize_restarting(
        cost,
        &[initial.c_l1, initial.c_d0, initial.c_d1],
        steps,
        &options.nelder_mead,
        options.max_restarts,
    );
    let coefficients = AeroCoefficients {
        c_l1: min.x[0],
        c_d0: min.x[1],
        c_d1: min.x[2],
        rho,
    };
    let (rms_error, per_robot_rms) = tc.rms(&coefficients)?;
    Ok(FitResult {
        coefficients,
        rms_error,
        initial_rms_error: initial_rms,
        per_robot_rms,
        datapoints_used: data.len(),
        evaluations: min.evaluations,
        termination: min.termination,
    })
}

impl FitResult {
    /// Plain-text summary with a per-robot RMS table in mN.
    pub fn write_report<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "c_l1                   = {}", sig9(self.coefficients.c_l1))?;
        writeln!(out, "c_d0                   = {}", sig9(self.coefficients.c_d0))?;
        writeln!(out, "c_d1                   = {}", sig9(self.coefficients.c_d1))?;
        writeln!(out, "rms_error              = {} mN", sig9(self.rms_error * 1e3))?;
        writeln!(out, "initial_rms_error      = {} mN", sig9(self.initial_rms_error * 1e3))?;
        writeln!(out, "datapoints_used        = {}", self.datapoints_used)?;
        writeln!(out, "termination            = {}", self.termination.as_str())?;
        writeln!(out)?;
        writeln!(out, "robot_id,rms_mN")?;
        for (id, rms) in &self.per_robot_rms {
            writeln!(out, "{id},{}", sig9(rms * 1e3))?;
        }
        Ok(())
    }
}
