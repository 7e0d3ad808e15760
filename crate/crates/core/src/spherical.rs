//! Spherical shell `x1 <= x <= x2`, flux incident on the inner surface.
//!
//! ```text
//! u(x, tau) = A / x + B
//!           + sum_n e^{s_n tau} M(x; beta_n) / (s_n G'(beta_n) beta'(s_n))
//! M(x; beta) = sqrt3 x1^2 [(2 - sqrt3 x2) sin(beta (x2 - x)) - 2 beta x2 cos(beta (x2 - x))] / x
//! ```
//!
//! with `G` the cleared shell function
//! [`spherical_residual`](crate::roots::spherical_residual). Far from the
//! origin (`x1 >> x2 - x1`) the solution approaches the slab of thickness
//! `x2 - x1`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::model::DimensionlessProblem;
use crate::planar::Currents;
use crate::roots::{find_roots, shell_dg, RootSet};
use crate::series::{modal_sum, FieldPair, FieldSnapshot, Mode, ModeSet, SeriesValue, TimeFactor};
use crate::{Geometry, PolePair, SQRT3};

/// Coefficients of the steady profile `A / x + B`.
pub fn steady_coefficients(x1: f64, x2: f64) -> Result<(f64, f64)> {
    check_radii(x1, x2)?;
    Ok(coefficients(x1, x2))
}

fn coefficients(x1: f64, x2: f64) -> (f64, f64) {
    let den = 2.0 * x1 * x1 - SQRT3 * x1 * x1 * x2 + SQRT3 * x1 * x2 * x2 + 2.0 * x2 * x2;
    (SQRT3 * x1 * x1 * x2 * x2 / den, x1 * x1 * (2.0 - SQRT3 * x2) / den)
}

/// Steady profile; radiation and material agree.
pub fn steady_profile(x: f64, x1: f64, x2: f64) -> Result<(f64, f64)> {
    check_radii(x1, x2)?;
    check_x(x, x1, x2)?;
    let (a, b) = coefficients(x1, x2);
    let u = a / x + b;
    Ok((u, u))
}

fn check_radii(x1: f64, x2: f64) -> Result<()> {
    if !(x1 > 0.0 && x1 < x2 && x2.is_finite()) {
        return domain(format!("shell radii must satisfy 0 < x1 < x2, got {x1}, {x2}"));
    }
    Ok(())
}

fn check_x(x: f64, x1: f64, x2: f64) -> Result<()> {
    if !(x1..=x2).contains(&x) {
        return domain(format!("x = {x} outside [{x1}, {x2}]"));
    }
    Ok(())
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return domain(format!("tau must be finite and non-negative, got {tau}"));
    }
    Ok(())
}

/// `psi = 4 pi int x^2 u dx` and the volume averages of both densities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShellIntegrals {
    pub psi_r: SeriesValue,
    pub psi_m: SeriesValue,
    pub mean_u: SeriesValue,
    pub mean_v: SeriesValue,
}

/// Residue series of the shell problem, immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalSeries {
    x1: f64,
    x2: f64,
    eps: f64,
    set: ModeSet,
}

impl SphericalSeries {
    pub fn new(x1: f64, x2: f64, eps: f64, n_roots: usize) -> Result<Self> {
        Self::from_problem(&DimensionlessProblem::shell(x1, x2, eps)?, n_roots)
    }

    pub fn from_problem(problem: &DimensionlessProblem, n_roots: usize) -> Result<Self> {
        let (x1, x2) = match problem.geometry {
            Geometry::Shell { x1, x2 } => (x1, x2),
            Geometry::Slab { .. } => return domain("spherical series needs a shell geometry"),
        };
        let roots = find_roots(problem, n_roots)?;
        let set = ModeSet::build(roots, problem.eps, 1.0, |beta| shell_dg(beta, x1, x2))?;
        Ok(Self { x1, x2, eps: problem.eps, set })
    }

    pub fn radii(&self) -> (f64, f64) {
        (self.x1, self.x2)
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn n_roots(&self) -> usize {
        self.set.n_roots()
    }

    pub fn roots(&self) -> &RootSet {
        &self.set.roots
    }

    pub fn poles(&self) -> &[PolePair] {
        &self.set.poles
    }

    pub fn modes(&self) -> &[Mode] {
        &self.set.modes
    }

    fn lead(&self) -> f64 {
        SQRT3 * self.x1 * self.x1
    }

    /// `(a, c)` in `h = a sin(beta (x2 - x)) + c cos(beta (x2 - x))`.
    fn h_coefs(&self, beta: f64) -> (f64, f64) {
        (2.0 - SQRT3 * self.x2, -2.0 * beta * self.x2)
    }

    fn h_bound(&self, beta: f64) -> f64 {
        let (a, c) = self.h_coefs(beta);
        a.hypot(c)
    }

    fn shape(&self, x: f64) -> impl Fn(&Mode) -> f64 + '_ {
        move |m| {
            let (a, c) = self.h_coefs(m.beta);
            let (sin, cos) = (m.beta * (self.x2 - x)).sin_cos();
            self.lead() * (a * sin + c * cos) / x
        }
    }

    fn shape_dx(&self, x: f64) -> impl Fn(&Mode) -> f64 + '_ {
        move |m| {
            let (a, c) = self.h_coefs(m.beta);
            let (sin, cos) = (m.beta * (self.x2 - x)).sin_cos();
            let h = a * sin + c * cos;
            let dh = m.beta * (-a * cos + c * sin);
            self.lead() * (dh / x - h / (x * x))
        }
    }

    /// `4 pi int x^2 M dx`.
    fn shape_volume(&self, m: &Mode) -> f64 {
        let (beta, l, x2) = (m.beta, self.x2 - self.x1, self.x2);
        let (sin, cos) = (beta * l).sin_cos();
        let x_sin = x2 * (1.0 - cos) / beta - (sin - beta * l * cos) / (beta * beta);
        let x_cos = x2 * sin / beta - (cos + beta * l * sin - 1.0) / (beta * beta);
        let (a, c) = self.h_coefs(beta);
        4.0 * PI * self.lead() * (a * x_sin + c * x_cos)
    }

    fn volume(&self) -> f64 {
        4.0 * PI * (self.x2.powi(3) - self.x1.powi(3)) / 3.0
    }

    /// `u` and `v` at `(x, tau)` summed over every root.
    pub fn fields(&self, x: f64, tau: f64) -> Result<FieldPair> {
        self.fields_truncated(x, tau, self.n_roots())
    }

    /// `u` and `v` using only the first `n_roots` roots.
    pub fn fields_truncated(&self, x: f64, tau: f64, n_roots: usize) -> Result<FieldPair> {
        check_x(x, self.x1, self.x2)?;
        check_tau(tau)?;
        let (a, b) = coefficients(self.x1, self.x2);
        let steady = a / x + b;
        let env = |m: &Mode| self.lead() * self.h_bound(m.beta) / self.x1;
        let sum = |time| modal_sum(&self.set, n_roots, tau, time, steady, self.shape(x), env);
        Ok(FieldPair { u: sum(TimeFactor::Radiation), v: sum(TimeFactor::Material) })
    }

    /// The material density as the literal residue sum `e^{s tau} / (s + 1)`;
    /// slower to converge than [`fields`](Self::fields), kept as a cross-check.
    pub fn material_residue_sum(&self, x: f64, tau: f64) -> Result<SeriesValue> {
        check_x(x, self.x1, self.x2)?;
        check_tau(tau)?;
        let (a, b) = coefficients(self.x1, self.x2);
        let env = |m: &Mode| self.lead() * self.h_bound(m.beta) / self.x1;
        Ok(modal_sum(&self.set, self.n_roots(), tau, TimeFactor::MaterialResidue, a / x + b, self.shape(x), env))
    }

    /// `du/dx` and `dv/dx`.
    pub fn gradients(&self, x: f64, tau: f64) -> Result<FieldPair> {
        check_x(x, self.x1, self.x2)?;
        check_tau(tau)?;
        let (a, _) = coefficients(self.x1, self.x2);
        let slope = -a / (x * x);
        let env = |m: &Mode| self.lead() * self.h_bound(m.beta) * (m.beta / self.x1 + 1.0 / (self.x1 * self.x1));
        let sum = |time| modal_sum(&self.set, self.n_roots(), tau, time, slope, self.shape_dx(x), env);
        Ok(FieldPair { u: sum(TimeFactor::Radiation), v: sum(TimeFactor::Material) })
    }

    /// Fields and gradients on a grid.
    pub fn snapshot(&self, xs: &[f64], tau: f64) -> Result<FieldSnapshot> {
        let mut snap = FieldSnapshot {
            tau,
            x: xs.to_vec(),
            u: Vec::with_capacity(xs.len()),
            v: Vec::with_capacity(xs.len()),
            du_dx: Vec::with_capacity(xs.len()),
            dv_dx: Vec::with_capacity(xs.len()),
            tol: Vec::with_capacity(xs.len()),
        };
        for &x in xs {
            let f = self.fields(x, tau)?;
            let g = self.gradients(x, tau)?;
            snap.u.push(f.u.value);
            snap.v.push(f.v.value);
            snap.du_dx.push(g.u.value);
            snap.dv_dx.push(g.v.value);
            snap.tol.push(f.u.tol.max(f.v.tol).max(g.u.tol).max(g.v.tol));
        }
        Ok(snap)
    }

    /// Outgoing currents `u + (2/sqrt3) u'` at `x1` and `u - (2/sqrt3) u'` at `x2`.
    pub fn leakage_currents(&self, tau: f64) -> Result<Currents> {
        let k = 2.0 / SQRT3;
        let (u1, g1) = (self.fields(self.x1, tau)?.u, self.gradients(self.x1, tau)?.u);
        let (u2, g2) = (self.fields(self.x2, tau)?.u, self.gradients(self.x2, tau)?.u);
        Ok(Currents {
            j_minus: SeriesValue { value: u1.value + k * g1.value, tol: u1.tol + k * g1.tol },
            j_plus: SeriesValue { value: u2.value - k * g2.value, tol: u2.tol + k * g2.tol },
        })
    }

    pub fn integrated_densities(&self, tau: f64) -> Result<ShellIntegrals> {
        check_tau(tau)?;
        let (a, b) = coefficients(self.x1, self.x2);
        let (x1, x2) = (self.x1, self.x2);
        let steady = 4.0 * PI * (a * (x2 * x2 - x1 * x1) / 2.0 + b * (x2.powi(3) - x1.powi(3)) / 3.0);
        let volume = |m: &Mode| self.shape_volume(m);
        let env = |m: &Mode| self.shape_volume(m).abs();
        let sum = |time| modal_sum(&self.set, self.n_roots(), tau, time, steady, volume, env);
        let (psi_r, psi_m) = (sum(TimeFactor::Radiation), sum(TimeFactor::Material));
        let vol = self.volume();
        let mean = |p: SeriesValue| SeriesValue { value: p.value / vol, tol: p.tol / vol };
        Ok(ShellIntegrals { psi_r, psi_m, mean_u: mean(psi_r), mean_v: mean(psi_m) })
    }

    /// `eps psi_r' + psi_m' - 4 pi [x2^2 u'(x2) - x1^2 u'(x1)]` from the
    /// term-by-term rates of the residue series.
    pub fn energy_balance_residual(&self, tau: f64) -> Result<f64> {
        if !(tau > 0.0) {
            return domain(format!("balance needs tau > 0, got {tau}"));
        }
        let n = self.n_roots();
        let volume = |m: &Mode| self.shape_volume(m);
        let rate = |time| modal_sum(&self.set, n, tau, time, 0.0, volume, |_| 0.0).value;
        let lhs = self.eps * rate(TimeFactor::RadiationRate) + rate(TimeFactor::MaterialResidueRate);
        let (x1, x2) = (self.x1, self.x2);
        let rhs = 4.0
            * PI
            * (x2 * x2 * self.gradients(x2, tau)?.u.value - x1 * x1 * self.gradients(x1, tau)?.u.value);
        Ok(lhs - rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::PlanarSeries;
    use approx::assert_relative_eq;

    fn series() -> SphericalSeries {
        SphericalSeries::new(1.0, 2.0, 0.1, 30).unwrap()
    }

    #[test]
    fn steady_profile_satisfies_both_conditions() {
        let k = 2.0 / SQRT3;
        for (x1, x2) in [(1.0, 2.0), (2.0, 3.0), (0.5, 4.0)] {
            let (a, b) = steady_coefficients(x1, x2).unwrap();
            let u = |x: f64| a / x + b;
            let du = |x: f64| -a / (x * x);
            assert!((u(x1) - k * du(x1) - 1.0).abs() < 1e-14);
            assert!((u(x2) + k * du(x2)).abs() < 1e-14);
        }
        assert!(steady_coefficients(2.0, 1.0).is_err());
    }

    #[test]
    fn initial_condition_holds_within_truncation() {
        let s = series();
        for x in [1.0, 1.5, 2.0] {
            let f = s.fields(x, 0.0).unwrap();
            assert!(f.u.value.abs() <= f.u.tol, "x={x}: u={} tol={}", f.u.value, f.u.tol);
            assert_eq!(f.v.value, 0.0);
        }
    }

    #[test]
    fn boundary_conditions_hold_for_every_truncation() {
        let s = series();
        let k = 2.0 / SQRT3;
        for tau in [0.01, 0.5, 5.0] {
            let u1 = s.fields(1.0, tau).unwrap().u.value;
            let g1 = s.gradients(1.0, tau).unwrap().u.value;
            let u2 = s.fields(2.0, tau).unwrap().u.value;
            let g2 = s.gradients(2.0, tau).unwrap().u.value;
            assert!((u1 - k * g1 - 1.0).abs() < 1e-11, "tau {tau}");
            assert!((u2 + k * g2).abs() < 1e-11, "tau {tau}");
        }
    }

    #[test]
    fn gradients_match_centered_differences() {
        let s = series();
        let h = 1e-5;
        for x in [1.2, 1.6, 1.9] {
            let up = s.fields(x + h, 0.7).unwrap();
            let dn = s.fields(x - h, 0.7).unwrap();
            let g = s.gradients(x, 0.7).unwrap();
            assert!(((up.u.value - dn.u.value) / (2.0 * h) - g.u.value).abs() < 1e-6);
            assert!(((up.v.value - dn.v.value) / (2.0 * h) - g.v.value).abs() < 1e-6);
        }
    }

    #[test]
    fn steady_currents() {
        let c = series().leakage_currents(50.0).unwrap();
        assert!((c.j_minus.value + 0.188345).abs() < 1e-5);
        assert!((c.j_plus.value - 0.297086).abs() < 1e-5);
    }

    #[test]
    fn volume_integrals_match_quadrature() {
        let s = series();
        let tau = 0.8;
        let ints = s.integrated_densities(tau).unwrap();
        let n = 2000;
        let h = 1.0 / n as f64;
        let (mut qu, mut qv) = (0.0, 0.0);
        for i in 0..=n {
            let x = 1.0 + i as f64 * h;
            let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            let f = s.fields(x, tau).unwrap();
            qu += w * x * x * f.u.value;
            qv += w * x * x * f.v.value;
        }
        let scale = 4.0 * PI * h / 3.0;
        assert_relative_eq!(ints.psi_r.value, qu * scale, max_relative = 1e-8);
        assert_relative_eq!(ints.psi_m.value, qv * scale, max_relative = 1e-8);
        assert_relative_eq!(ints.mean_u.value * s.volume(), ints.psi_r.value, max_relative = 1e-14);
    }

    #[test]
    fn energy_balance_is_an_identity() {
        let s = series();
        for tau in [0.1, 1.0, 4.0] {
            assert!(s.energy_balance_residual(tau).unwrap().abs() <= 1e-10);
        }
    }

    #[test]
    fn thin_shell_far_out_looks_planar() {
        let shell = SphericalSeries::new(100.0, 101.0, 0.1, 30).unwrap();
        let slab = PlanarSeries::new(1.0, 0.1, 30).unwrap();
        for tau in [0.1, 1.0, 10.0] {
            for xi in [0.0, 0.5, 1.0] {
                let a = shell.fields(100.0 + xi, tau).unwrap().u.value;
                let b = slab.fields(xi, tau).unwrap().u.value;
                assert!((a - b).abs() < 0.02, "tau {tau} xi {xi}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let s = series();
        assert!(s.fields(0.5, 1.0).is_err());
        assert!(s.fields(1.5, f64::NAN).is_err());
        assert!(SphericalSeries::from_problem(&DimensionlessProblem::slab(1.0, 0.1).unwrap(), 3).is_err());
    }
}
