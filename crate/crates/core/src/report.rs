//! Number formatting and the trim report.

use std::fmt::Write as _;

use crate::trim::TrimState;

/// Formats `x` with 9 significant digits, trailing zeros removed. Plain
/// decimal notation is used for exponents in [-5, 9], scientific otherwise.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.8e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..=9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let fixed = format!("{:.*}", decimals, x);
        trim_zeros(&fixed)
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".to_string()
    } else {
        t.to_string()
    }
}

const GRAM_FORCE: f64 = 9.80665e-3;

/// Human-readable `key = value unit` report for one trim solution.
pub fn trim_report(trim: &TrimState, robot_mass_kg: f64, fixed_mass_kg: f64) -> String {
    let mut s = String::new();
    let mut line = |key: &str, value: f64, unit: &str| {
        if unit.is_empty() {
            writeln!(s, "{key:<22} = {}", sig9(value)).unwrap();
        } else {
            writeln!(s, "{key:<22} = {} {unit}", sig9(value)).unwrap();
        }
    };
    line("voltage", trim.voltage, "V");
    line("revolving_speed", trim.omega_rev, "rad/s");
    line("revolving_speed_rev", trim.omega_rev / std::f64::consts::TAU, "rev/s");
    line("thrust", trim.thrust, "N");
    line("thrust_gf", trim.thrust / GRAM_FORCE, "gf");
    line("thrust_mn", trim.thrust * 1e3, "mN");
    line("torque", trim.torque, "N*m");
    line("prop_thrust", trim.prop.thrust, "N");
    line("prop_speed", trim.prop.omega, "rad/s");
    line("prop_induced_velocity", trim.prop.induced_velocity, "m/s");
    line("prop_axial_inflow", trim.prop.axial_inflow, "m/s");
    line("robot_mass", robot_mass_kg * 1e3, "g");
    line("fixed_mass", fixed_mass_kg * 1e3, "g");
    line("payload_margin", trim.payload_margin, "N");
    line(
        "thrust_to_weight",
        trim.thrust / (robot_mass_kg * trim.gravity),
        "",
    );
    s
}
