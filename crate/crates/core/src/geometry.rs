//! Wing planform and robot mass model.

use std::io::Write;

use crate::error::{Error, Result};
use crate::spline::NaturalCubicSpline;

/// Wing root as a fraction of the tip radius.
pub const ROOT_FRACTION: f64 = 0.15;
/// Number of revolving airfoils on the robot.
pub const AIRFOIL_COUNT: u32 = 2;

const AREA_PANELS_PER_SEGMENT: usize = 64;

/// One airfoil's planform: a chord spline through three control chords with
/// zero chord at the tip, plus the fixed pitch angle.
#[derive(Debug, Clone, PartialEq)]
pub struct WingGeometry {
    pitch: f64,
    tip_radius: f64,
    chords: [f64; 3],
    spline: NaturalCubicSpline,
}

impl WingGeometry {
    pub fn new(pitch: f64, tip_radius: f64, chords: [f64; 3]) -> Result<Self> {
        if !(pitch > 0.0 && pitch < std::f64::consts::FRAC_PI_2) {
            return Err(Error::invalid("pitch", "must lie strictly between 0 and 90 degrees"));
        }
        if !(tip_radius > 0.0 && tip_radius.is_finite()) {
            return Err(Error::invalid("r_tip", "must be positive"));
        }
        if chords.iter().any(|c| !(*c >= 0.0 && c.is_finite())) {
            return Err(Error::invalid("chord", "control chords must be non-negative"));
        }
        Ok(Self::unchecked(pitch, tip_radius, chords))
    }

    /// Builds the spline without validating; the optimizer uses this to score
    /// infeasible candidates.
    pub(crate) fn unchecked(pitch: f64, tip_radius: f64, chords: [f64; 3]) -> Self {
        let knots = Self::knot_positions(tip_radius);
        let spline = NaturalCubicSpline::new(&knots, &[chords[0], chords[1], chords[2], 0.0]);
        Self {
            pitch,
            tip_radius,
            chords,
            spline,
        }
    }

    /// Control chord radii: root, two uniformly spaced interior knots, tip.
    pub fn knot_positions(tip_radius: f64) -> [f64; 4] {
        let root = ROOT_FRACTION * tip_radius;
        let span = tip_radius - root;
        [root, root + span / 3.0, root + 2.0 * span / 3.0, tip_radius]
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn tip_radius(&self) -> f64 {
        self.tip_radius
    }

    pub fn root_radius(&self) -> f64 {
        ROOT_FRACTION * self.tip_radius
    }

    pub fn chords(&self) -> [f64; 3] {
        self.chords
    }

    pub fn airfoil_count(&self) -> u32 {
        AIRFOIL_COUNT
    }

    pub fn with_pitch(&self, pitch: f64) -> Result<Self> {
        Self::new(pitch, self.tip_radius, self.chords)
    }

    /// Raw spline value, possibly negative between knots.
    pub(crate) fn spline_value(&self, r: f64) -> f64 {
        if r >= self.tip_radius {
            return 0.0;
        }
        self.spline.eval(r)
    }

    /// Chord length at radius `r`, clamped at zero from below.
    pub fn chord_at(&self, r: f64) -> Result<f64> {
        let root = self.root_radius();
        if !(r >= root && r <= self.tip_radius) {
            return Err(Error::OutOfSpan {
                r,
                root,
                tip: self.tip_radius,
            });
        }
        Ok(self.spline_value(r).max(0.0))
    }

    /// Largest negative excursion of the raw spline over the span (≥ 0).
    pub fn negative_chord_excursion(&self) -> f64 {
        let root = self.root_radius();
        let n = 600;
        let h = (self.tip_radius - root) / n as f64;
        (0..=n)
            .map(|i| -self.spline_value(root + i as f64 * h))
            .fold(0.0, f64::max)
    }

    /// Planform area of one wing.
    pub fn wing_area(&self) -> f64 {
        self.wing_area_with(AREA_PANELS_PER_SEGMENT)
    }

    /// Composite Simpson rule with `panels` (rounded up to even) per spline segment.
    pub fn wing_area_with(&self, panels: usize) -> f64 {
        let panels = (panels.max(2) + 1) & !1;
        let knots = Self::knot_positions(self.tip_radius);
        let chord = |r: f64| self.spline_value(r).max(0.0);
        knots
            .windows(2)
            .map(|seg| {
                let (a, b) = (seg[0], seg[1]);
                let h = (b - a) / panels as f64;
                let interior: f64 = (1..panels)
                    .map(|i| {
                        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                        w * chord(a + i as f64 * h)
                    })
                    .sum();
                h / 3.0 * (chord(a) + interior + chord(b))
            })
            .sum()
    }

    /// Writes `r_m,chord_m,leading_edge_y_m,trailing_edge_y_m` rows. The
    /// leading edge is the straight line y = 0.
    pub fn write_planform_csv<W: Write>(&self, mut out: W, rows: usize) -> Result<()> {
        let rows = rows.max(2);
        writeln!(out, "r_m,chord_m,leading_edge_y_m,trailing_edge_y_m")?;
        let root = self.root_radius();
        for i in 0..rows {
            let r = if i == rows - 1 {
                self.tip_radius
            } else {
                root + (self.tip_radius - root) * i as f64 / (rows - 1) as f64
            };
            let c = self.chord_at(r)?;
            writeln!(
                out,
                "{},{},{},{}",
                crate::report::sig9(r),
                crate::report::sig9(c),
                crate::report::sig9(0.0),
                crate::report::sig9(-c)
            )?;
        }
        Ok(())
    }
}

/// Mass of everything that scales with the design plus a fixed remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassModel {
    /// kg/m, carbon rod airframe
    pub rod_linear_density: f64,
    /// kg/m², film plus spars
    pub wing_areal_density: f64,
    /// kg: motors, propellers, electronics, battery, mounts
    pub fixed_mass: f64,
}

impl MassModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.rod_linear_density >= 0.0) {
            return Err(Error::invalid("rod_linear_density", "must be non-negative"));
        }
        if !(self.wing_areal_density >= 0.0) {
            return Err(Error::invalid("wing_areal_density", "must be non-negative"));
        }
        if !(self.fixed_mass >= 0.0) {
            return Err(Error::invalid("fixed_mass", "must be non-negative"));
        }
        Ok(())
    }

    /// Airframe (motor-to-motor rod of length 2·r_m) plus both wings.
    pub fn airframe_and_wings(&self, geometry: &WingGeometry, r_m: f64) -> f64 {
        self.rod_linear_density * 2.0 * r_m
            + self.wing_areal_density * AIRFOIL_COUNT as f64 * geometry.wing_area()
    }

    /// Fixed mass needed for a design to weigh `total` kg.
    pub fn fixed_mass_for_total(&self, geometry: &WingGeometry, r_m: f64, total: f64) -> f64 {
        total - self.airframe_and_wings(geometry, r_m)
    }
}

/// Total robot mass in kg.
pub fn robot_mass(geometry: &WingGeometry, mass_model: &MassModel, r_m: f64) -> f64 {
    mass_model.fixed_mass + mass_model.airframe_and_wings(geometry, r_m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wing(chords: [f64; 3]) -> WingGeometry {
        WingGeometry::new(27.5f64.to_radians(), 0.2, chords).unwrap()
    }

    #[test]
    fn chord_hits_knots() {
        let w = wing([0.03, 0.05, 0.07]);
        let k = WingGeometry::knot_positions(0.2);
        assert_eq!(w.chord_at(0.2).unwrap(), 0.0);
        assert!((w.chord_at(k[0]).unwrap() - 0.03).abs() < 1e-12 * 0.03);
        assert!((w.chord_at(k[1]).unwrap() - 0.05).abs() < 1e-12 * 0.05);
        assert!((w.chord_at(k[2]).unwrap() - 0.07).abs() < 1e-12 * 0.07);
        let flat = wing([0.04, 0.04, 0.04]);
        for r in &k[..3] {
            assert!((flat.chord_at(*r).unwrap() - 0.04).abs() < 1e-14);
        }
    }

    #[test]
    fn out_of_span_is_an_error() {
        let w = wing([0.03, 0.05, 0.07]);
        assert!(matches!(w.chord_at(0.01), Err(Error::OutOfSpan { .. })));
        assert!(matches!(w.chord_at(0.21), Err(Error::OutOfSpan { .. })));
    }

    #[test]
    fn chord_is_c1_across_knots() {
        let w = wing([0.02, 0.06, 0.08]);
        let k = WingGeometry::knot_positions(0.2);
        let h = 1e-7;
        for r in &k[1..3] {
            let left = (w.spline_value(*r) - w.spline_value(r - h)) / h;
            let right = (w.spline_value(r + h) - w.spline_value(*r)) / h;
            assert!((left - right).abs() < 1e-5, "{left} vs {right}");
            assert!((w.spline_value(r - 1e-12) - w.spline_value(r + 1e-12)).abs() < 1e-9);
        }
    }

    #[test]
    fn area_examples() {
        assert_eq!(wing([0.0, 0.0, 0.0]).wing_area(), 0.0);

        let w = wing([0.05, 0.05, 0.05]);
        // fine trapezoid oracle
        let n = 100_000;
        let (a, b) = (w.root_radius(), w.tip_radius());
        let h = (b - a) / n as f64;
        let trap: f64 = (0..=n)
            .map(|i| {
                let r = if i == n { b } else { a + i as f64 * h };
                let wgt = if i == 0 || i == n { 0.5 } else { 1.0 };
                wgt * w.chord_at(r).unwrap()
            })
            .sum::<f64>()
            * h;
        assert!((w.wing_area() - trap).abs() / trap < 1e-3);

        let w2 = wing([0.1, 0.1, 0.1]);
        assert!((w2.wing_area() - 2.0 * w.wing_area()).abs() / w.wing_area() < 1e-9);

        let coarse = w.wing_area_with(64);
        let fine = w.wing_area_with(128);
        assert!((coarse - fine).abs() / fine < 1e-3);
    }

    #[test]
    fn area_is_monotone_in_each_chord() {
        let base = [0.03, 0.05, 0.07];
        for idx in 0..3 {
            let mut prev = 0.0;
            for step in 0..20 {
                let mut c = base;
                c[idx] = step as f64 * 0.005;
                let a = wing(c).wing_area();
                assert!(a >= prev - 1e-15);
                prev = a;
            }
        }
    }

    #[test]
    fn mass_examples() {
        let w = wing([0.03, 0.05, 0.07]);
        let fixed_only = MassModel {
            rod_linear_density: 0.0,
            wing_areal_density: 0.0,
            fixed_mass: 0.0138,
        };
        assert_eq!(robot_mass(&w, &fixed_only, 0.2), 0.0138);

        let m1 = MassModel {
            rod_linear_density: 4.7e-3,
            wing_areal_density: 92.6e-3,
            fixed_mass: 0.0,
        };
        let m2 = MassModel {
            wing_areal_density: 2.0 * 92.6e-3,
            ..m1
        };
        let rod = 4.7e-3 * 0.4;
        let wings1 = robot_mass(&w, &m1, 0.2) - rod;
        let wings2 = robot_mass(&w, &m2, 0.2) - rod;
        assert!((wings2 - 2.0 * wings1).abs() < 1e-15);

        let fixed = m1.fixed_mass_for_total(&w, 0.2, 0.0138);
        let total = robot_mass(&w, &MassModel { fixed_mass: fixed, ..m1 }, 0.2);
        assert!((total - 0.0138).abs() < 1e-15);
        assert!((total * 9.81 - 0.135378).abs() < 1e-9);
    }

    #[test]
    fn planform_csv_layout() {
        let w = wing([0.03, 0.05, 0.07]);
        let mut buf = Vec::new();
        w.write_planform_csv(&mut buf, 5).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "r_m,chord_m,leading_edge_y_m,trailing_edge_y_m");
        assert_eq!(lines.len(), 6);
        assert!(lines[5].starts_with("0.2,0,0,"));
    }

    #[test]
    fn rejects_bad_pitch() {
        assert!(WingGeometry::new(0.0, 0.2, [0.01; 3]).is_err());
        assert!(WingGeometry::new(1.6, 0.2, [0.01; 3]).is_err());
        assert!(WingGeometry::new(0.3, 0.2, [-0.01, 0.01, 0.01]).is_err());
    }
}
