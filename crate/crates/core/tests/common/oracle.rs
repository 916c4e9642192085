//! Brute-force reference solutions written straight from the governing
//! equations, sharing no solver code with the library.

use std::f64::consts::PI;

use samara_core::model::{AeroCoefficients, MotorParams, PropellerParams};

fn cl(alpha: f64, c: &AeroCoefficients) -> f64 {
    c.c_l1 * (2.0 * alpha).sin()
}

fn cd(alpha: f64, c: &AeroCoefficients) -> f64 {
    c.c_d0 + c.c_d1 * (1.0 - (2.0 * alpha).cos())
}

/// Momentum minus blade-element thrust and torque per unit span, both wings.
pub fn station_residuals(
    r: f64,
    omega: f64,
    chord: f64,
    beta: f64,
    c: &AeroCoefficients,
    v_a: f64,
    v_t: f64,
) -> (f64, f64) {
    let rho = c.rho;
    let ut = omega * r - v_t;
    let w2 = ut * ut + v_a * v_a;
    let eps = v_a.atan2(ut);
    let a = beta - eps;
    let q = 0.5 * rho * w2 * chord * 2.0;
    let t_be = q * (cl(a, c) * eps.cos() - cd(a, c) * eps.sin());
    let q_be = q * (cl(a, c) * eps.sin() + cd(a, c) * eps.cos()) * r;
    let t_mt = 4.0 * PI * r * rho * v_a * v_a;
    let q_mt = 4.0 * PI * r * r * rho * v_a * v_t;
    (t_mt - t_be, q_mt - q_be)
}

/// Grid cell holding the station solution.
pub struct GridCell {
    /// Lower corner.
    pub v_a: f64,
    pub v_t: f64,
    pub pitch_a: f64,
    pub pitch_t: f64,
}

impl GridCell {
    pub fn contains(&self, v_a: f64, v_t: f64) -> bool {
        let slack = 1e-9;
        v_a >= self.v_a - slack * self.pitch_a
            && v_a <= self.v_a + (1.0 + slack) * self.pitch_a
            && v_t >= self.v_t - slack * self.pitch_t
            && v_t <= self.v_t + (1.0 + slack) * self.pitch_t
    }
}

/// Evaluates both residuals on an `n × n` node grid over
/// `v_a ∈ [0, 0.75 Ωr]`, `v_θ ∈ [0, 0.5 Ωr]` and returns every cell across
/// which both change sign.
pub fn station_grid_search(
    r: f64,
    omega: f64,
    chord: f64,
    beta: f64,
    c: &AeroCoefficients,
    n: usize,
) -> Vec<GridCell> {
    let vb = omega * r;
    let (ha, ht) = (0.75 * vb / (n - 1) as f64, 0.5 * vb / (n - 1) as f64);
    let row = |i: usize| -> Vec<(f64, f64)> {
        (0..n)
            .map(|j| station_residuals(r, omega, chord, beta, c, i as f64 * ha, j as f64 * ht))
            .collect()
    };
    let changes = |v: [f64; 4]| v.iter().any(|x| *x > 0.0) && v.iter().any(|x| *x <= 0.0);
    let mut cells = Vec::new();
    let mut prev = row(0);
    for i in 1..n {
        let cur = row(i);
        for j in 0..n - 1 {
            let corners = [prev[j], prev[j + 1], cur[j], cur[j + 1]];
            if changes(corners.map(|c| c.0)) && changes(corners.map(|c| c.1)) {
                cells.push(GridCell {
                    v_a: (i - 1) as f64 * ha,
                    v_t: j as f64 * ht,
                    pitch_a: ha,
                    pitch_t: ht,
                });
            }
        }
        prev = cur;
    }
    cells
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Propeller thrust at spin rate `w`, solving the induced velocity by
/// bisection rather than the quadratic formula.
pub fn prop_thrust_at(w: f64, inflow: f64, p: &PropellerParams, rho: f64) -> (f64, f64) {
    let area = PI * p.radius * p.radius;
    let be = |v: f64| {
        0.5 * rho * p.blade_count as f64 * p.radius.powi(4) * w * w
            * (p.a0 - p.a1 * (v + inflow) / (w * p.radius))
    };
    if be(0.0) <= 0.0 {
        return (be(0.0), 0.0);
    }
    let v = bisect(0.0, 100.0, |v| 2.0 * rho * area * v * (v + inflow) - be(v));
    (be(v), v)
}

/// Spin rate and thrust where motor torque meets propeller torque.
pub fn prop_operating_point(
    voltage: f64,
    inflow: f64,
    p: &PropellerParams,
    m: &MotorParams,
    rho: f64,
) -> (f64, f64) {
    let excess = |w: f64| {
        let (t, v) = prop_thrust_at(w, inflow, p, rho);
        let q = 0.5 * rho * p.blade_count as f64 * p.radius.powi(5) * p.a2 * w * w
            + t * (p.kappa * v + inflow) / w;
        m.back_emf / m.resistance * (voltage - m.back_emf * w) - q
    };
    let w = bisect(1e-6, voltage / m.back_emf, excess);
    (w, prop_thrust_at(w, inflow, p, rho).0)
}

/// First sign change of `f` on `n` uniform points over `[lo, hi]`, as the
/// bracketing interval.
pub fn first_sign_change(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> Option<(f64, f64)> {
    let h = (hi - lo) / (n - 1) as f64;
    let mut prev = f(lo);
    for i in 1..n {
        let x = lo + i as f64 * h;
        let v = f(x);
        if (prev > 0.0) != (v > 0.0) {
            return Some((x - h, x));
        }
        prev = v;
    }
    None
}
