//! Finite slab `0 <= x <= b`, flux incident on `x = 0`.
//!
//! ```text
//! u(x, tau) = (3b + 2 sqrt3 - 3x) / (3b + 4 sqrt3)
//!           + sum_n e^{s_n tau} N(x; beta_n) / (s_n D'(beta_n) beta'(s_n))
//! N(x; beta) = 3 sin(beta (b - x)) + 2 sqrt3 beta cos(beta (b - x))
//! ```
//!
//! `D'` is the `beta`-derivative of the cleared transcendental function
//! [`planar_residual`](crate::roots::planar_residual). Every mode satisfies
//! both Marshak conditions on its own, so boundary residuals are round-off for
//! any truncation; only the initial condition feels the truncation.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::model::DimensionlessProblem;
use crate::roots::{find_roots, planar_residual_derivative, RootSet};
use crate::series::{modal_sum, FieldPair, FieldSnapshot, Mode, ModeSet, SeriesValue, TimeFactor};
use crate::{PolePair, SQRT3};

/// Steady profile `(3b + 2 sqrt3 - 3x) / (3b + 4 sqrt3)`; radiation and
/// material agree.
pub fn steady_profile(x: f64, b: f64) -> Result<(f64, f64)> {
    check_x(x, b)?;
    let u = steady_u(x, b);
    Ok((u, u))
}

/// Slope of the steady profile, `-3 / (3b + 4 sqrt3)`.
pub fn steady_slope(b: f64) -> f64 {
    -3.0 / (3.0 * b + 4.0 * SQRT3)
}

fn steady_u(x: f64, b: f64) -> f64 {
    (3.0 * b + 2.0 * SQRT3 - 3.0 * x) / (3.0 * b + 4.0 * SQRT3)
}

/// Radiation density at `tau = 0` when `eps = 0`:
/// `[3 sinh(b - x) + 2 sqrt3 cosh(b - x)] / [7 sinh b + 4 sqrt3 cosh b]`.
/// The material density starts at zero.
pub fn eps0_initial_profile(x: f64, b: f64) -> Result<f64> {
    check_x(x, b)?;
    let y = b - x;
    Ok((3.0 * y.sinh() + 2.0 * SQRT3 * y.cosh()) / (7.0 * b.sinh() + 4.0 * SQRT3 * b.cosh()))
}

/// `x`-derivative of [`eps0_initial_profile`].
pub fn eps0_initial_gradient(x: f64, b: f64) -> Result<f64> {
    check_x(x, b)?;
    let y = b - x;
    Ok(-(3.0 * y.cosh() + 2.0 * SQRT3 * y.sinh()) / (7.0 * b.sinh() + 4.0 * SQRT3 * b.cosh()))
}

fn check_x(x: f64, b: f64) -> Result<()> {
    if !(b > 0.0) {
        return domain(format!("slab thickness must be positive, got {b}"));
    }
    if !(0.0..=b).contains(&x) {
        return domain(format!("x = {x} outside [0, {b}]"));
    }
    Ok(())
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return domain(format!("tau must be finite and non-negative, got {tau}"));
    }
    Ok(())
}

/// Outgoing partial currents at the two faces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Currents {
    /// At the driven face, `u + (2/sqrt3) u'`.
    pub j_minus: SeriesValue,
    /// At the free face, `u - (2/sqrt3) u'`.
    pub j_plus: SeriesValue,
}

/// `psi_r = int u dx`, `psi_m = int v dx` over the slab.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Integrals {
    pub psi_r: SeriesValue,
    pub psi_m: SeriesValue,
}

/// Residue series of the slab problem, immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarSeries {
    b: f64,
    eps: f64,
    set: ModeSet,
}

impl PlanarSeries {
    pub fn new(b: f64, eps: f64, n_roots: usize) -> Result<Self> {
        Self::from_problem(&DimensionlessProblem::slab(b, eps)?, n_roots)
    }

    pub fn from_problem(problem: &DimensionlessProblem, n_roots: usize) -> Result<Self> {
        let b = match problem.geometry {
            crate::Geometry::Slab { b } => b,
            crate::Geometry::Shell { .. } => return domain("planar series needs a slab geometry"),
        };
        let roots = find_roots(problem, n_roots)?;
        let set = ModeSet::build(roots, problem.eps, 1.0, |beta| planar_residual_derivative(beta, b))?;
        Ok(Self { b, eps: problem.eps, set })
    }

    pub fn b(&self) -> f64 {
        self.b
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

    fn shape(&self, x: f64) -> impl Fn(&Mode) -> f64 {
        let b = self.b;
        move |m| {
            let (sin, cos) = (m.beta * (b - x)).sin_cos();
            3.0 * sin + 2.0 * SQRT3 * m.beta * cos
        }
    }

    fn shape_dx(&self, x: f64) -> impl Fn(&Mode) -> f64 {
        let b = self.b;
        move |m| {
            let (sin, cos) = (m.beta * (b - x)).sin_cos();
            m.beta * (-3.0 * cos + 2.0 * SQRT3 * m.beta * sin)
        }
    }

    fn shape_integral(&self) -> impl Fn(&Mode) -> f64 {
        let b = self.b;
        move |m| {
            let (sin, cos) = (m.beta * b).sin_cos();
            3.0 * (1.0 - cos) / m.beta + 2.0 * SQRT3 * sin
        }
    }

    fn envelope(m: &Mode) -> f64 {
        (9.0 + 12.0 * m.beta * m.beta).sqrt()
    }

    /// `u` and `v` at `(x, tau)` summed over every root.
    pub fn fields(&self, x: f64, tau: f64) -> Result<FieldPair> {
        self.fields_truncated(x, tau, self.n_roots())
    }

    /// `u` and `v` using only the first `n_roots` roots.
    pub fn fields_truncated(&self, x: f64, tau: f64, n_roots: usize) -> Result<FieldPair> {
        check_x(x, self.b)?;
        check_tau(tau)?;
        let steady = steady_u(x, self.b);
        let sum = |time| modal_sum(&self.set, n_roots, tau, time, steady, self.shape(x), Self::envelope);
        Ok(FieldPair { u: sum(TimeFactor::Radiation), v: sum(TimeFactor::Material) })
    }

    /// The material density as the literal residue sum `e^{s tau} / (s + 1)`.
    /// Converges much more slowly than [`fields`](Self::fields); kept as a
    /// cross-check.
    pub fn material_residue_sum(&self, x: f64, tau: f64) -> Result<SeriesValue> {
        check_x(x, self.b)?;
        check_tau(tau)?;
        let steady = steady_u(x, self.b);
        Ok(modal_sum(&self.set, self.n_roots(), tau, TimeFactor::MaterialResidue, steady, self.shape(x), Self::envelope))
    }

    /// `du/dx` and `dv/dx`.
    pub fn gradients(&self, x: f64, tau: f64) -> Result<FieldPair> {
        check_x(x, self.b)?;
        check_tau(tau)?;
        let slope = steady_slope(self.b);
        let env = |m: &Mode| m.beta * Self::envelope(m);
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

    pub fn leakage_currents(&self, tau: f64) -> Result<Currents> {
        let k = 2.0 / SQRT3;
        let (u0, g0) = (self.fields(0.0, tau)?.u, self.gradients(0.0, tau)?.u);
        let (ub, gb) = (self.fields(self.b, tau)?.u, self.gradients(self.b, tau)?.u);
        Ok(Currents {
            j_minus: SeriesValue { value: u0.value + k * g0.value, tol: u0.tol + k * g0.tol },
            j_plus: SeriesValue { value: ub.value - k * gb.value, tol: ub.tol + k * gb.tol },
        })
    }

    pub fn integrated_densities(&self, tau: f64) -> Result<Integrals> {
        check_tau(tau)?;
        let steady = 0.5 * self.b;
        let integral = self.shape_integral();
        let env = |m: &Mode| self.shape_integral()(m).abs();
        let sum = |time| modal_sum(&self.set, self.n_roots(), tau, time, steady, &integral, env);
        Ok(Integrals { psi_r: sum(TimeFactor::Radiation), psi_m: sum(TimeFactor::Material) })
    }

    /// `eps psi_r' + psi_m' - [u'(b) - u'(0)]`, with the rates taken term by
    /// term from the residue series. Zero up to round-off for any truncation.
    pub fn energy_balance_residual(&self, tau: f64) -> Result<f64> {
        if !(tau > 0.0) {
            return domain(format!("balance needs tau > 0, got {tau}"));
        }
        let n = self.n_roots();
        let integral = self.shape_integral();
        let rate = |time| modal_sum(&self.set, n, tau, time, 0.0, &integral, |_| 0.0).value;
        let lhs = self.eps * rate(TimeFactor::RadiationRate) + rate(TimeFactor::MaterialResidueRate);
        let rhs = self.gradients(self.b, tau)?.u.value - self.gradients(0.0, tau)?.u.value;
        Ok(lhs - rhs)
    }
}
