#![allow(dead_code)]

pub mod fixture;
pub mod oracle;

use rand::Rng;
use samara_core::optimizer::DesignVector;
use samara_core::WingGeometry;

/// Random design well inside the feasible box.
pub fn random_design<R: Rng>(rng: &mut R) -> DesignVector {
    let r_tip = rng.gen_range(0.12..0.22);
    DesignVector {
        beta: rng.gen_range(10.0f64..40.0).to_radians(),
        r_m: rng.gen_range(r_tip..0.23),
        r_tip,
        chords: [
            rng.gen_range(0.01..0.08),
            rng.gen_range(0.02..0.10),
            rng.gen_range(0.02..0.12),
        ],
    }
}

pub fn geometry_of(d: &DesignVector) -> WingGeometry {
    WingGeometry::new(d.beta, d.r_tip, d.chords).unwrap()
}
