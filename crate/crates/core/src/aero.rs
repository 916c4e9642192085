//! Coupled momentum-theory / blade-element solve for the revolving wings.
//!
//! At each radial station the axial and tangential induced velocities are
//! found such that the annulus momentum balance and the blade-element forces
//! agree for both thrust and torque. The equations are homogeneous in the
//! local blade speed `Ωr`, so the solve runs on `x = v_a/(Ωr)`,
//! `y = v_θ/(Ωr)` and the result is rescaled.

use std::f64::consts::PI;
use std::io::Write;

use crate::error::{Error, Result};
use crate::geometry::{WingGeometry, AIRFOIL_COUNT};
use crate::model::AeroCoefficients;
use crate::report::sig9;

pub const DEFAULT_STATION_COUNT: usize = 128;
pub const MIN_STATION_COUNT: usize = 16;
/// Reference revolving rate at which the coefficients are integrated, rad/s.
pub const REFERENCE_OMEGA: f64 = 50.0;

/// Convergence controls for the per-station solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationSolver {
    pub tolerance: f64,
    pub max_iterations: usize,
    /// N/m; floor on the force scale when forming relative residuals.
    pub residual_floor: f64,
    pub damping: f64,
}

impl Default for StationSolver {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            max_iterations: 200,
            residual_floor: 1e-12,
            damping: 0.5,
        }
    }
}

/// Converged state of one radial strip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationSolution {
    pub r: f64,
    pub v_a: f64,
    pub v_theta: f64,
    pub alpha: f64,
    pub epsilon: f64,
    pub v_b: f64,
    /// Thrust per unit span, N/m (momentum side).
    pub dt_dr: f64,
    /// Torque per unit span, N·m/m (momentum side).
    pub dq_dr: f64,
    /// Blade-element thrust per unit span at the same state.
    pub dt_dr_blade: f64,
    pub dq_dr_blade: f64,
    pub iterations: usize,
}

impl StationSolution {
    fn trivial(r: f64, omega: f64, beta: f64) -> Self {
        Self {
            r,
            v_a: 0.0,
            v_theta: 0.0,
            alpha: beta,
            epsilon: 0.0,
            v_b: omega * r,
            dt_dr: 0.0,
            dq_dr: 0.0,
            dt_dr_blade: 0.0,
            dq_dr_blade: 0.0,
            iterations: 0,
        }
    }

    /// The wing is stalled backwards at this station (downwash exceeds pitch).
    pub fn negative_alpha(&self) -> bool {
        self.alpha < 0.0
    }

    pub fn thrust_residual(&self, floor: f64) -> f64 {
        relative(self.dt_dr, self.dt_dr_blade, floor)
    }

    pub fn torque_residual(&self, floor: f64) -> f64 {
        relative(self.dq_dr, self.dq_dr_blade, floor)
    }
}

fn relative(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}

/// Normalized station equations. `solidity` is `N c / (8 π r)`.
struct NormalizedStation<'a> {
    solidity: f64,
    beta: f64,
    coeffs: &'a AeroCoefficients,
}

/// Momentum and blade-element terms at one normalized state.
struct Balance {
    thrust_mt: f64,
    thrust_be: f64,
    torque_mt: f64,
    torque_be: f64,
}

impl Balance {
    fn residual(&self) -> (f64, f64) {
        (
            relative(self.thrust_mt, self.thrust_be, f64::MIN_POSITIVE),
            relative(self.torque_mt, self.torque_be, f64::MIN_POSITIVE),
        )
    }
}

impl NormalizedStation<'_> {
    fn balance(&self, x: f64, y: f64) -> Balance {
        let tangential = 1.0 - y;
        let w2 = tangential * tangential + x * x;
        let eps = x.atan2(tangential);
        let alpha = self.beta - eps;
        let cl = self.coeffs.lift_coefficient(alpha);
        let cd = self.coeffs.drag_coefficient(alpha);
        let (s, c) = eps.sin_cos();
        Balance {
            thrust_mt: x * x,
            thrust_be: self.solidity * w2 * (cl * c - cd * s),
            torque_mt: x * y,
            torque_be: self.solidity * w2 * (cl * s + cd * c),
        }
    }

    fn equations(&self, x: f64, y: f64) -> [f64; 2] {
        let b = self.balance(x, y);
        [b.thrust_mt - b.thrust_be, b.torque_mt - b.torque_be]
    }

    fn converged(&self, x: f64, y: f64, tol: f64) -> bool {
        if !(x.is_finite() && y.is_finite()) || x <= 0.0 {
            return false;
        }
        let (rt, rq) = self.balance(x, y).residual();
        rt < tol && rq < tol
    }

    fn norm(&self, x: f64, y: f64) -> f64 {
        let b = self.balance(x, y);
        let (rt, rq) = b.residual();
        if rt.is_finite() && rq.is_finite() {
            rt.max(rq)
        } else {
            f64::INFINITY
        }
    }

    /// Damped fixed-point sweep: x from the thrust balance, y from the torque balance.
    fn fixed_point(&self, mut x: f64, mut y: f64, solver: &StationSolver) -> (f64, f64, usize, bool) {
        for it in 1..=solver.max_iterations {
            let b = self.balance(x, y);
            let x_new = b.thrust_be.max(0.0).sqrt();
            if x_new <= 0.0 {
                return (x, y, it, false);
            }
            let y_new = b.torque_be / x_new;
            x += solver.damping * (x_new - x);
            y += solver.damping * (y_new - y);
            if self.converged(x, y, solver.tolerance) {
                return (x, y, it, true);
            }
        }
        (x, y, solver.max_iterations, false)
    }

    /// Newton iteration with a forward-difference Jacobian and step halving.
    fn newton(&self, mut x: f64, mut y: f64, max_iter: usize, tol: f64) -> (f64, f64, usize, bool) {
        for it in 1..=max_iter {
            if self.converged(x, y, tol) {
                return (x, y, it - 1, true);
            }
            let f = self.equations(x, y);
            let hx = 1e-7 * x.abs().max(1e-6);
            let hy = 1e-7 * y.abs().max(1e-6);
            let fx = self.equations(x + hx, y);
            let fy = self.equations(x, y + hy);
            let j = [
                [(fx[0] - f[0]) / hx, (fy[0] - f[0]) / hy],
                [(fx[1] - f[1]) / hx, (fy[1] - f[1]) / hy],
            ];
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det == 0.0 || !det.is_finite() {
                return (x, y, it, false);
            }
            let dx = (f[0] * j[1][1] - f[1] * j[0][1]) / det;
            let dy = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
            let current = self.norm(x, y);
            let mut step = 1.0;
            loop {
                let (xn, yn) = (x - step * dx, y - step * dy);
                if xn > 0.0 && yn < 1.0 && self.norm(xn, yn) < current {
                    x = xn;
                    y = yn;
                    break;
                }
                step *= 0.5;
                if step < 1e-10 {
                    return (x, y, it, self.converged(x, y, tol));
                }
            }
        }
        (x, y, max_iter, self.converged(x, y, tol))
    }

    fn solve(&self, solver: &StationSolver) -> std::result::Result<(f64, f64, usize), (f64, f64, usize)> {
        let (x0, y0) = (0.05, 0.0);
        let (x, y, it, ok) = self.fixed_point(x0, y0, solver);
        if ok {
            let (xp, yp) = self.polish(x, y);
            return Ok((xp, yp, it));
        }
        let (xn, yn, itn, okn) = self.newton(x0, y0, solver.max_iterations, solver.tolerance);
        if okn {
            let (xp, yp) = self.polish(xn, yn);
            return Ok((xp, yp, it + itn));
        }
        let (xd, yd) = self.downwash_bisection();
        let (xp, yp) = self.polish(xd, yd);
        if self.converged(xp, yp, solver.tolerance) {
            return Ok((xp, yp, it + itn + 1));
        }
        Err((xn, yn, it + itn))
    }

    /// Eliminating x and y leaves `sin²ε = σ (C_l cos ε − C_d sin ε)` in the
    /// downwash angle alone, bracketed on (0, β]. The tangential ratio then
    /// follows from the torque balance.
    fn downwash_bisection(&self) -> (f64, f64) {
        let thrust_gap = |eps: f64| {
            let alpha = self.beta - eps;
            let (s, c) = eps.sin_cos();
            s * s
                - self.solidity
                    * (self.coeffs.lift_coefficient(alpha) * c - self.coeffs.drag_coefficient(alpha) * s)
        };
        let (mut lo, mut hi) = (0.0, self.beta);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if thrust_gap(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let eps = 0.5 * (lo + hi);
        let alpha = self.beta - eps;
        let (s, c) = eps.sin_cos();
        let torque_term = self.solidity
            * (self.coeffs.lift_coefficient(alpha) * s + self.coeffs.drag_coefficient(alpha) * c);
        let y = torque_term / (s * c + torque_term);
        ((1.0 - y) * eps.tan(), y)
    }

    /// A couple of Newton steps past the tolerance, kept only while they help.
    fn polish(&self, x: f64, y: f64) -> (f64, f64) {
        let mut best = (x, y, self.norm(x, y));
        for _ in 0..3 {
            let (xn, yn, _, _) = self.newton(best.0, best.1, 1, 0.0);
            let n = self.norm(xn, yn);
            if n < best.2 {
                best = (xn, yn, n);
            } else {
                break;
            }
        }
        (best.0, best.1)
    }
}

/// Solves one radial station of the revolving wing.
pub fn solve_station(
    r: f64,
    omega_rev: f64,
    chord: f64,
    beta: f64,
    coeffs: &AeroCoefficients,
) -> Result<StationSolution> {
    solve_station_with(r, omega_rev, chord, beta, coeffs, &StationSolver::default())
}

pub fn solve_station_with(
    r: f64,
    omega_rev: f64,
    chord: f64,
    beta: f64,
    coeffs: &AeroCoefficients,
    solver: &StationSolver,
) -> Result<StationSolution> {
    if !(r > 0.0) {
        return Err(Error::invalid("r", "station radius must be positive"));
    }
    if !(omega_rev > 0.0) {
        return Err(Error::invalid("omega_rev", "revolving rate must be positive"));
    }
    if !(chord >= 0.0) {
        return Err(Error::invalid("chord", "must be non-negative"));
    }
    if !(beta > 0.0 && beta < std::f64::consts::FRAC_PI_2) {
        return Err(Error::invalid("pitch", "must lie strictly between 0 and 90 degrees"));
    }
    if chord == 0.0 {
        return Ok(StationSolution::trivial(r, omega_rev, beta));
    }
    let station = NormalizedStation {
        solidity: AIRFOIL_COUNT as f64 * chord / (8.0 * PI * r),
        beta,
        coeffs,
    };
    let blade_speed = omega_rev * r;
    // dimensional scale of both normalized balances
    let force_scale = 4.0 * PI * r * coeffs.rho * blade_speed * blade_speed;
    let (x, y, iterations) = match station.solve(solver) {
        Ok(v) => v,
        Err((x, y, iterations)) => {
            let b = station.balance(x, y);
            return Err(Error::StationNotConverged {
                r,
                iterations,
                thrust_residual: relative(b.thrust_mt, b.thrust_be, 0.0),
                torque_residual: relative(b.torque_mt, b.torque_be, 0.0),
            });
        }
    };
    let b = station.balance(x, y);
    let tangential = 1.0 - y;
    let epsilon = x.atan2(tangential);
    let sol = StationSolution {
        r,
        v_a: x * blade_speed,
        v_theta: y * blade_speed,
        alpha: beta - epsilon,
        epsilon,
        v_b: blade_speed * (tangential * tangential + x * x).sqrt(),
        dt_dr: force_scale * b.thrust_mt,
        dq_dr: force_scale * r * b.torque_mt,
        dt_dr_blade: force_scale * b.thrust_be,
        dq_dr_blade: force_scale * r * b.torque_be,
        iterations,
    };
    let (rt, rq) = (
        sol.thrust_residual(solver.residual_floor),
        sol.torque_residual(solver.residual_floor),
    );
    if rt >= solver.tolerance || rq >= solver.tolerance {
        return Err(Error::StationNotConverged {
            r,
            iterations,
            thrust_residual: rt,
            torque_residual: rq,
        });
    }
    Ok(sol)
}

/// Thrust and torque coefficients of the wing pair, `T_R = C_T,R Ω²` and
/// `Q = C_Q Ω²`, with the spanwise station data they were integrated from.
#[derive(Debug, Clone, PartialEq)]
pub struct WingAeroResult {
    /// N·s²/rad²
    pub c_t_r: f64,
    /// N·m·s²/rad²
    pub c_q: f64,
    /// Revolving rate the stations were solved at.
    pub omega: f64,
    pub stations: Vec<StationSolution>,
}

impl WingAeroResult {
    pub fn thrust(&self, omega: f64) -> f64 {
        self.c_t_r * omega * omega
    }

    pub fn torque(&self, omega: f64) -> f64 {
        self.c_q * omega * omega
    }

    pub fn any_negative_alpha(&self) -> bool {
        self.stations.iter().any(StationSolution::negative_alpha)
    }

    /// Writes `r_m,v_a_m_s,v_theta_m_s,alpha_deg,dT_dr_N_m,dQ_dr_N` rows.
    pub fn write_spanwise_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "r_m,v_a_m_s,v_theta_m_s,alpha_deg,dT_dr_N_m,dQ_dr_N")?;
        for s in &self.stations {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                sig9(s.r),
                sig9(s.v_a),
                sig9(s.v_theta),
                sig9(s.alpha.to_degrees()),
                sig9(s.dt_dr),
                sig9(s.dq_dr)
            )?;
        }
        Ok(())
    }
}

/// Integrates the station solutions over the span at [`REFERENCE_OMEGA`].
pub fn wing_coefficients(
    geometry: &WingGeometry,
    coeffs: &AeroCoefficients,
    station_count: usize,
) -> Result<WingAeroResult> {
    wing_coefficients_at(
        geometry,
        coeffs,
        station_count,
        REFERENCE_OMEGA,
        &StationSolver::default(),
    )
}

/// Midpoint-rule integration of the station solutions at revolving rate `omega`.
pub fn wing_coefficients_at(
    geometry: &WingGeometry,
    coeffs: &AeroCoefficients,
    station_count: usize,
    omega: f64,
    solver: &StationSolver,
) -> Result<WingAeroResult> {
    if station_count < MIN_STATION_COUNT {
        return Err(Error::invalid(
            "station_count",
            format!("need at least {MIN_STATION_COUNT} stations"),
        ));
    }
    coeffs.validate()?;
    let root = geometry.root_radius();
    let dr = (geometry.tip_radius() - root) / station_count as f64;
    let stations = (0..station_count)
        .map(|i| {
            let r = root + (i as f64 + 0.5) * dr;
            let chord = geometry.chord_at(r)?;
            solve_station_with(r, omega, chord, geometry.pitch(), coeffs, solver)
        })
        .collect::<Result<Vec<_>>>()?;
    let thrust: f64 = stations.iter().map(|s| s.dt_dr).sum::<f64>() * dr;
    let torque: f64 = stations.iter().map(|s| s.dq_dr).sum::<f64>() * dr;
    Ok(WingAeroResult {
        c_t_r: thrust / (omega * omega),
        c_q: torque / (omega * omega),
        omega,
        stations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs() -> AeroCoefficients {
        AeroCoefficients::pre_fit()
    }

    #[test]
    fn zero_chord_is_trivial() {
        let s = solve_station(0.1, 40.0, 0.0, 0.4, &coeffs()).unwrap();
        assert_eq!((s.v_a, s.v_theta, s.dt_dr, s.dq_dr), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn residuals_below_tolerance() {
        let beta = 27.5f64.to_radians();
        let s = solve_station(0.15, 40.0, 0.05, beta, &coeffs()).unwrap();
        assert!(s.thrust_residual(1e-12) < 1e-9);
        assert!(s.torque_residual(1e-12) < 1e-9);
        assert!(s.v_a > 0.0 && s.v_theta > 0.0 && s.v_theta < 40.0 * 0.15);
        assert!((s.alpha - (beta - s.epsilon)).abs() < 1e-15);
        assert!(s.epsilon > 0.0 && s.alpha < beta);
    }

    #[test]
    fn doubling_omega_doubles_velocities() {
        let beta = 27.5f64.to_radians();
        let a = solve_station(0.12, 30.0, 0.04, beta, &coeffs()).unwrap();
        let b = solve_station(0.12, 60.0, 0.04, beta, &coeffs()).unwrap();
        assert!((b.v_a - 2.0 * a.v_a).abs() <= 1e-12 * b.v_a);
        assert!((b.v_theta - 2.0 * a.v_theta).abs() <= 1e-12 * b.v_theta);
        assert_eq!(a.alpha, b.alpha);
    }

    #[test]
    fn solidity_extremes_converge() {
        let c = coeffs();
        for &(r, chord) in &[(0.02, 0.25), (0.03, 0.3), (0.2, 0.0005), (0.05, 0.1)] {
            for deg in [2.0, 10.0, 27.5, 45.0, 70.0, 85.0] {
                let s = solve_station(r, 40.0, chord, f64::to_radians(deg), &c);
                assert!(s.is_ok(), "r={r} c={chord} beta={deg}: {s:?}");
            }
        }
    }

    #[test]
    fn station_count_floor() {
        let g = WingGeometry::new(0.4, 0.2, [0.03, 0.05, 0.07]).unwrap();
        assert!(wing_coefficients(&g, &coeffs(), 8).is_err());
    }

    #[test]
    fn coefficients_independent_of_reference_speed() {
        let g = WingGeometry::new(0.45, 0.2, [0.02, 0.05, 0.08]).unwrap();
        let s = StationSolver::default();
        let a = wing_coefficients_at(&g, &coeffs(), 64, 30.0, &s).unwrap();
        let b = wing_coefficients_at(&g, &coeffs(), 64, 60.0, &s).unwrap();
        assert!((a.c_t_r - b.c_t_r).abs() < 1e-6 * a.c_t_r);
        assert!((a.c_q - b.c_q).abs() < 1e-6 * a.c_q);
    }

    #[test]
    fn pitch_increases_torque() {
        let mut prev = 0.0;
        for deg in (5..=40).step_by(5) {
            let g = WingGeometry::new(f64::to_radians(deg as f64), 0.2, [0.03, 0.05, 0.07]).unwrap();
            let r = wing_coefficients(&g, &coeffs(), 64).unwrap();
            assert!(r.c_q > prev);
            prev = r.c_q;
        }
    }
}
