//! `samara` command-line front end.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use samara_core::aero::wing_coefficients_at;
use samara_core::calibration::{self, FitOptions, MeasurementSet};
use samara_core::config::RobotConfig;
use samara_core::optimizer::{self, DesignVector, OptimizerOptions};
use samara_core::propulsion::{prop_curve, write_prop_curve_csv};
use samara_core::report::{sig9, trim_report};
use samara_core::robot::CRAZYFLIE_BENCH;
use samara_core::{solve_trim, voltage_sweep, Error, Result, Robot};

#[derive(Parser)]
#[command(name = "samara", version, about = "Revolving-wing robot thrust, design and calibration")]
struct Cli {
    /// Built-in parameter set the config files are layered on
    #[arg(long, global = true, default_value = CRAZYFLIE_BENCH)]
    profile: String,
    /// Config file overriding profile values; later files win
    #[arg(long = "config", short = 'c', global = true)]
    configs: Vec<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trim the robot at one drive voltage
    Predict {
        #[arg(long)]
        voltage: f64,
        /// Spanwise loading CSV at the trim speed
        #[arg(long)]
        spanwise: Option<PathBuf>,
    },
    /// Trim over a range of voltages
    Sweep {
        #[arg(long)]
        v_min: f64,
        #[arg(long)]
        v_max: f64,
        #[arg(long, default_value_t = 7)]
        steps: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Propeller thrust against axial inflow
    PropCurve {
        #[arg(long)]
        voltage: f64,
        #[arg(long, default_value_t = 10.0)]
        inflow_max: f64,
        #[arg(long, default_value_t = 21)]
        steps: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Maximize payload starting from the configured design
    Optimize {
        /// Optimized config file
        #[arg(long)]
        out: PathBuf,
        /// Best objective per iteration
        #[arg(long)]
        history: Option<PathBuf>,
        #[arg(long)]
        planform: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        restarts: usize,
        /// Voltage the payload is evaluated at (default: motor maximum)
        #[arg(long)]
        voltage: Option<f64>,
    },
    /// Refit lift and drag coefficients to bench measurements
    Fit {
        /// CSV with robot_id,omega_rad_s,thrust_mN
        #[arg(long)]
        measurements: PathBuf,
        /// Directory holding <robot_id>.cfg per robot
        #[arg(long)]
        geometries: PathBuf,
        /// Coefficient file, an [aero] section usable with --config
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the effective configuration
    Config,
}

#[derive(Args)]
struct OutArg {
    /// Output CSV (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn predict(robot: &Robot, voltage: f64, spanwise: Option<&Path>) -> Result<()> {
    let trim = solve_trim(voltage, robot)?;
    if let Some(path) = spanwise {
        let wing = wing_coefficients_at(
            &robot.geometry,
            &robot.aero,
            robot.station_count,
            trim.omega_rev,
            &robot.station_solver,
        )?;
        let mut out = create(path)?;
        wing.write_spanwise_csv(&mut out)?;
        out.flush()?;
    }
    print!("{}", trim_report(&trim, robot.mass(), robot.mass.fixed_mass));
    Ok(())
}

fn sweep(robot: &Robot, v_min: f64, v_max: f64, steps: usize, out: Option<&Path>) -> Result<()> {
    let rows = voltage_sweep(v_min, v_max, steps, robot)?;
    let mut w = output(out)?;
    writeln!(w, "U_V,omega_rad_s,omega_sq,thrust_mN,torque_Nmm")?;
    let mut first_error = None;
    for (u, row) in rows {
        match row {
            Ok(t) => writeln!(
                w,
                "{},{},{},{},{}",
                sig9(u),
                sig9(t.omega_rev),
                sig9(t.omega_rev * t.omega_rev),
                sig9(t.thrust * 1e3),
                sig9(t.torque * 1e3)
            )?,
            Err(e) => {
                eprintln!("samara: {} V: {e}", sig9(u));
                first_error.get_or_insert(e);
            }
        }
    }
    w.flush()?;
    first_error.map_or(Ok(()), Err)
}

fn optimize(
    cfg: &RobotConfig,
    robot: &Robot,
    out: &Path,
    history: Option<&Path>,
    planform: Option<&Path>,
    options: OptimizerOptions,
) -> Result<()> {
    let report = optimizer::optimize(&DesignVector::of_robot(robot), robot, &options)?;
    let mut best_cfg = cfg.clone();
    best_cfg.set_design(&report.best);
    let best = best_cfg.to_robot()?;
    let eval = optimizer::evaluate(&DesignVector::of_robot(&best), &best, &options);
    let trim = eval.trim.ok_or_else(|| {
        Error::Infeasible("optimized design cannot be trimmed".to_string())
    })?;
    best_cfg.write(out)?;
    if let Some(path) = history {
        let mut w = create(path)?;
        writeln!(w, "iteration,best_objective_N")?;
        for (i, v) in report.history.iter().enumerate() {
            writeln!(w, "{},{}", i, sig9(*v))?;
        }
        w.flush()?;
    }
    if let Some(path) = planform {
        let mut w = create(path)?;
        best.geometry.write_planform_csv(&mut w, 101)?;
        w.flush()?;
    }
    let v = |s, k| sig9(best_cfg.get(s, k).expect("design key"));
    println!("objective              = {} N", sig9(eval.objective));
    println!("pitch                  = {} deg", v("geometry", "pitch_deg"));
    println!("mount_radius           = {} mm", v("propulsion", "mount_radius_mm"));
    println!("tip_radius             = {} mm", v("geometry", "r_tip_mm"));
    println!("chord_1                = {} mm", v("geometry", "c1_mm"));
    println!("chord_2                = {} mm", v("geometry", "c2_mm"));
    println!("chord_3                = {} mm", v("geometry", "c3_mm"));
    println!("wing_area              = {} mm^2", sig9(best.geometry.wing_area() * 1e6));
    println!("iterations             = {}", report.iterations);
    println!("evaluations            = {}", report.evaluations);
    println!("termination            = {}", report.termination.as_str());
    println!();
    print!("{}", trim_report(&trim, best.mass(), best.mass.fixed_mass));
    Ok(())
}

fn fit(cfg: &RobotConfig, robot: &Robot, measurements: &Path, geometries: &Path, out: &Path) -> Result<()> {
    let records = calibration::read_measurements_csv(measurements)?;
    let registry = calibration::load_geometry_registry(geometries, cfg, &records)?;
    let data = MeasurementSet::new(records, registry)?;
    let options = FitOptions {
        station_count: robot.station_count,
        solver: robot.station_solver,
        ..FitOptions::default()
    };
    let result = calibration::fit(&data, &robot.aero, &options)?;
    let mut coeff_cfg = cfg.clone();
    coeff_cfg.set_aero(&result.coefficients);
    std::fs::write(out, coeff_cfg.sections_text(&["aero"]))?;
    let mut stdout = io::stdout().lock();
    result.write_report(&mut stdout)?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let cfg = RobotConfig::load(&cli.profile, &cli.configs)?;
    let robot = cfg.to_robot()?;
    match cli.command {
        Command::Predict { voltage, spanwise } => predict(&robot, voltage, spanwise.as_deref()),
        Command::Sweep {
            v_min,
            v_max,
            steps,
            out,
        } => sweep(&robot, v_min, v_max, steps, out.out.as_deref()),
        Command::PropCurve {
            voltage,
            inflow_max,
            steps,
            out,
        } => {
            let points = prop_curve(
                voltage,
                inflow_max,
                steps,
                &robot.propeller,
                &robot.motor,
                robot.aero.rho,
            )?;
            let mut w = output(out.out.as_deref())?;
            write_prop_curve_csv(&mut w, &points)?;
            w.flush()?;
            Ok(())
        }
        Command::Optimize {
            out,
            history,
            planform,
            restarts,
            voltage,
        } => optimize(
            &cfg,
            &robot,
            &out,
            history.as_deref(),
            planform.as_deref(),
            OptimizerOptions {
                max_restarts: restarts,
                voltage,
                ..OptimizerOptions::default()
            },
        ),
        Command::Fit {
            measurements,
            geometries,
            out,
        } => fit(&cfg, &robot, &measurements, &geometries, &out),
        Command::Config => {
            print!("{}", cfg.to_text());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("samara: {e}");
            ExitCode::from(match e {
                Error::Infeasible(_) => 4,
                ref e if e.is_input_error() => 2,
                _ => 3,
            })
        }
    }
}
