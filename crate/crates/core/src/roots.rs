//! Positive roots of the planar and spherical transcendental equations.
//!
//! The equations are handled in their cleared, singularity-free form
//! `g(beta) = 0` instead of `tan(beta w) = f(beta)`, so every root is a plain
//! sign change of a smooth function. Roots are bracketed on a uniform scan,
//! bisected and finished with two guarded Newton steps.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::model::{DimensionlessProblem, Geometry};
use crate::SQRT3;

/// Scan points per interval of length `pi / width`.
pub const SCAN_STEPS_PER_BRANCH: usize = 20;

const BISECTION_RTOL: f64 = 1e-13;

/// `(3 - 4 beta^2) sin(beta b) + 4 sqrt(3) beta cos(beta b)`.
pub fn planar_residual(beta: f64, b: f64) -> f64 {
    let (sin, cos) = (beta * b).sin_cos();
    (3.0 - 4.0 * beta * beta) * sin + 4.0 * SQRT3 * beta * cos
}

/// `d/dbeta` of [`planar_residual`]:
/// `(3b + 4 sqrt(3) - 4 beta^2 b) cos(beta b) - (4 sqrt(3) beta b + 8 beta) sin(beta b)`.
pub fn planar_residual_derivative(beta: f64, b: f64) -> f64 {
    let (sin, cos) = (beta * b).sin_cos();
    (3.0 * b + 4.0 * SQRT3 - 4.0 * beta * beta * b) * cos - (4.0 * SQRT3 * beta * b + 8.0 * beta) * sin
}

/// Cleared spherical-shell equation
/// `[(4 beta^2 - 3) x1 x2 - 2 sqrt(3) L + 4] sin(beta L) - [4 sqrt(3) beta x1 x2 + 4 beta L] cos(beta L)`
/// with `L = x2 - x1`.
pub fn spherical_residual(beta: f64, x1: f64, x2: f64) -> Result<f64> {
    check_shell(x1, x2)?;
    Ok(shell_g(beta, x1, x2))
}

/// `d/dbeta` of [`spherical_residual`].
pub fn spherical_residual_derivative(beta: f64, x1: f64, x2: f64) -> Result<f64> {
    check_shell(x1, x2)?;
    Ok(shell_dg(beta, x1, x2))
}

fn check_shell(x1: f64, x2: f64) -> Result<()> {
    if !(x1 > 0.0 && x1 < x2) {
        return domain(format!("shell radii must satisfy 0 < x1 < x2, got {x1}, {x2}"));
    }
    Ok(())
}

pub(crate) fn shell_g(beta: f64, x1: f64, x2: f64) -> f64 {
    let l = x2 - x1;
    let (sin, cos) = (beta * l).sin_cos();
    let p = (4.0 * beta * beta - 3.0) * x1 * x2 - 2.0 * SQRT3 * l + 4.0;
    let q = beta * (4.0 * SQRT3 * x1 * x2 + 4.0 * l);
    p * sin - q * cos
}

pub(crate) fn shell_dg(beta: f64, x1: f64, x2: f64) -> f64 {
    let l = x2 - x1;
    let (sin, cos) = (beta * l).sin_cos();
    let sin_coef = 4.0 * beta * (x1 * x1 + x2 * x2) + 4.0 * SQRT3 * beta * x1 * x2 * l;
    let cos_coef = 4.0 * beta * beta * x1 * x2 * l - 3.0 * x1 * x2 * l - 2.0 * SQRT3 * (x1 * x1 + x2 * x2);
    sin_coef * sin + cos_coef * cos
}

/// Ordered positive roots of one transcendental equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub geometry: Geometry,
    pub roots: Vec<f64>,
    /// `|g(beta_n)|` at each returned root.
    pub residuals: Vec<f64>,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// `|g| / (1 + |g'|)` at each root.
    pub fn scaled_residuals(&self) -> Vec<f64> {
        self.roots
            .iter()
            .zip(&self.residuals)
            .map(|(&beta, &r)| r / (1.0 + residual_derivative(&self.geometry, beta).abs()))
            .collect()
    }
}

pub(crate) fn residual(geometry: &Geometry, beta: f64) -> f64 {
    match *geometry {
        Geometry::Slab { b } => planar_residual(beta, b),
        Geometry::Shell { x1, x2 } => shell_g(beta, x1, x2),
    }
}

pub(crate) fn residual_derivative(geometry: &Geometry, beta: f64) -> f64 {
    match *geometry {
        Geometry::Slab { b } => planar_residual_derivative(beta, b),
        Geometry::Shell { x1, x2 } => shell_dg(beta, x1, x2),
    }
}

/// The `n` smallest positive roots for the problem's geometry.
pub fn find_roots(problem: &DimensionlessProblem, n: usize) -> Result<RootSet> {
    find_roots_with_resolution(&problem.geometry, n, SCAN_STEPS_PER_BRANCH)
}

/// As [`find_roots`] with an explicit scan density (points per `pi / width`).
pub fn find_roots_with_resolution(geometry: &Geometry, n: usize, steps_per_branch: usize) -> Result<RootSet> {
    geometry.validate()?;
    if n == 0 {
        return domain("at least one root must be requested");
    }
    if steps_per_branch < 2 {
        return domain("scan needs at least two points per branch");
    }
    let width = geometry.width();
    let step = PI / (steps_per_branch as f64 * width);
    // roots are asymptotically pi / width apart; leave generous headroom
    let max_steps = steps_per_branch * (n + 8) * 4;

    let mut roots = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    let mut lo = 1e-6 / width;
    let mut g_lo = residual(geometry, lo);
    for k in 1..=max_steps {
        let hi = 1e-6 / width + k as f64 * step;
        let g_hi = residual(geometry, hi);
        if g_hi == 0.0 {
            roots.push(hi);
            residuals.push(0.0);
        } else if g_lo != 0.0 && g_lo.signum() != g_hi.signum() {
            let beta = refine(geometry, lo, hi, g_lo);
            roots.push(beta);
            residuals.push(residual(geometry, beta).abs());
        }
        if roots.len() == n {
            return Ok(RootSet { geometry: *geometry, roots, residuals });
        }
        lo = hi;
        g_lo = g_hi;
    }
    Err(Error::BracketExhausted { branch: roots.len() + 1, beta_max: lo })
}

fn refine(geometry: &Geometry, mut lo: f64, mut hi: f64, mut g_lo: f64) -> f64 {
    while hi - lo > BISECTION_RTOL * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = residual(geometry, mid);
        if g_mid == 0.0 {
            return mid;
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    let mut beta = 0.5 * (lo + hi);
    for _ in 0..2 {
        let d = residual_derivative(geometry, beta);
        if d == 0.0 {
            break;
        }
        let next = beta - residual(geometry, beta) / d;
        // stay inside the (slightly widened) bracket
        let slack = hi - lo;
        if next >= lo - slack && next <= hi + slack {
            beta = next;
        }
    }
    beta
}

/// Number of sign changes of `g` on a uniform scan of `[1e-6 / width, upper]`.
pub fn count_sign_changes(geometry: &Geometry, upper: f64, steps_per_branch: usize) -> usize {
    let width = geometry.width();
    let start = 1e-6 / width;
    let step = PI / (steps_per_branch as f64 * width);
    let count = ((upper - start) / step).ceil().max(0.0) as usize;
    let mut prev = residual(geometry, start);
    let mut changes = 0;
    for k in 1..=count {
        let beta = (start + k as f64 * step).min(upper);
        let g = residual(geometry, beta);
        if g != 0.0 && prev != 0.0 && g.signum() != prev.signum() {
            changes += 1;
        }
        if g != 0.0 {
            prev = g;
        }
    }
    changes
}
