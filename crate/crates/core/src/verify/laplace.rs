//! Closed-form Laplace transforms `u_bar(x, s)`, `v_bar = u_bar / (s + 1)` for
//! real `s > 0`, evaluated in double-double.
//!
//! On the positive axis `beta^2 < 0`; with `beta = i y`,
//! `y = sqrt(s [1 + eps (s + 1)] / (s + 1))`, every trigonometric factor turns
//! hyperbolic and the `i`s cancel. Numerator and denominator are both scaled by
//! `e^{-y w}` (`w` the width) so nothing overflows.

use super::dd::Dd;
use crate::error::{domain, Result};
use crate::model::{DimensionlessProblem, Geometry};

fn sqrt3() -> Dd {
    Dd::new(3.0).sqrt()
}

fn wavenumber(s: Dd, eps: f64) -> Dd {
    let sp1 = s + 1.0;
    (s * (Dd::ONE + sp1 * eps) / sp1).sqrt()
}

/// `u_bar(x, s)` in double-double.
pub fn ubar_dd(x: Dd, s: Dd, problem: &DimensionlessProblem) -> Result<Dd> {
    if !(s.hi > 0.0) {
        return domain(format!("transform is sampled at s > 0, got {}", s.hi));
    }
    let y = wavenumber(s, problem.eps);
    let r3 = sqrt3();
    match problem.geometry {
        Geometry::Slab { b } => {
            let e1 = (-(y * x)).exp();
            let e2 = (-(y * (Dd::new(2.0 * b) - x))).exp();
            let e3 = (-(y * (2.0 * b))).exp();
            let num = (e1 - e2) * 1.5 + r3 * y * (e1 + e2);
            let den = (Dd::new(3.0) + y * y * 4.0) * (Dd::ONE - e3) * 0.5 + r3 * y * (Dd::ONE + e3) * 2.0;
            Ok(num / (s * den))
        }
        Geometry::Shell { x1, x2 } => {
            let l = x2 - x1;
            let e1 = (-(y * (x - x1))).exp();
            let e2 = (-(y * (Dd::new(2.0 * x2 - x1) - x))).exp();
            let e3 = (-(y * (2.0 * l))).exp();
            // sinh and cosh of y (x2 - x) and y l, times e^{-y l}
            let (sh, ch) = ((e1 - e2) * 0.5, (e1 + e2) * 0.5);
            let (shl, chl) = ((Dd::ONE - e3) * 0.5, (Dd::ONE + e3) * 0.5);
            let x1x2 = Dd::new(x1) * x2;
            let num = r3 * (x1 * x1) * ((Dd::new(2.0) - r3 * x2) * sh - y * (2.0 * x2) * ch);
            let p = (-(y * y) * 4.0 - 3.0) * x1x2 - r3 * (2.0 * l) + 4.0;
            let q = y * (r3 * x1x2 * 4.0 + 4.0 * l);
            let den = p * shl - q * chl;
            Ok(num / (s * x * den))
        }
    }
}

fn check_x(x: f64, problem: &DimensionlessProblem) -> Result<()> {
    let (lo, hi) = problem.geometry.bounds();
    if !(lo..=hi).contains(&x) {
        return domain(format!("x = {x} outside [{lo}, {hi}]"));
    }
    Ok(())
}

/// Transform of the radiation density.
pub fn laplace_space_u(x: f64, s: f64, problem: &DimensionlessProblem) -> Result<f64> {
    check_x(x, problem)?;
    Ok(ubar_dd(Dd::new(x), Dd::new(s), problem)?.to_f64())
}

/// Transform of the material density, `u_bar / (s + 1)`.
pub fn laplace_space_v(x: f64, s: f64, problem: &DimensionlessProblem) -> Result<f64> {
    check_x(x, problem)?;
    let s = Dd::new(s);
    Ok((ubar_dd(Dd::new(x), s, problem)? / (s + 1.0)).to_f64())
}
