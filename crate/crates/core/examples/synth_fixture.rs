//! Writes the bundled calibration fixture.
//!
//! `cargo run -p samara-core --example synth_fixture -- crates/core/tests/fixtures/calibration`

#[path = "../tests/common/fixture.rs"]
mod fixture;

use std::fs;
use std::path::PathBuf;

fn write_csv(path: PathBuf, noise: f64) {
    let mut out = String::from("robot_id,omega_rad_s,thrust_mN\n");
    for m in fixture::measurements(&fixture::TRUE_COEFFICIENTS, noise, fixture::NOISE_SEED) {
        out.push_str(&format!("{},{},{}\n", m.robot_id, m.omega, m.thrust * 1e3));
    }
    fs::write(path, out).unwrap();
}

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).expect("usage: synth_fixture <dir>"));
    let geometries = dir.join("geometries");
    fs::create_dir_all(&geometries).unwrap();
    for (id, text) in fixture::geometry_configs() {
        fs::write(geometries.join(format!("{id}.cfg")), text).unwrap();
    }
    write_csv(dir.join("clean.csv"), 0.0);
    write_csv(dir.join("noisy.csv"), fixture::NOISE_LEVEL);
}
