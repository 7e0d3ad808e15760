//! Independent oracles: numerical Laplace inversion, report-producing
//! comparisons and root-count convergence studies.

pub mod compare;
pub mod convergence;
pub mod dd;
pub mod laplace;
pub mod stehfest;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::model::DimensionlessProblem;
use dd::Dd;

pub use compare::{compare, compare_with_analytic, ComparisonReport, Norm, PointError, Quantity};
pub use convergence::{convergence_study, ConvergenceRow};
pub use laplace::{laplace_space_u, laplace_space_v};

/// Term count used when none is given. Fourteen terms leave errors near
/// `1e-6`; eighteen reach a few `1e-9` once the samples carry enough digits.
pub const DEFAULT_STEHFEST_TERMS: usize = 18;

/// Gaver-Stehfest estimate of `u` and `v` with a self-diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inversion {
    pub u: f64,
    pub v: f64,
    pub terms: usize,
    /// Largest change against the estimate with two fewer terms.
    pub spread: f64,
    /// `spread <= tolerance`.
    pub stable: bool,
}

fn estimate(x: f64, tau: f64, problem: &DimensionlessProblem, terms: usize) -> Result<(f64, f64)> {
    let xd = Dd::new(x);
    let u = stehfest::invert(|s| laplace::ubar_dd(xd, s, problem), tau, terms)?;
    let v = stehfest::invert(|s| Ok(laplace::ubar_dd(xd, s, problem)? / (s + 1.0)), tau, terms)?;
    Ok((u.to_f64(), v.to_f64()))
}

/// Inverts the closed-form transforms at `(x, tau)`.
pub fn invert_numerically(x: f64, tau: f64, problem: &DimensionlessProblem, terms: usize, tolerance: f64) -> Result<Inversion> {
    if !(10..=18).contains(&terms) || !terms.is_multiple_of(2) {
        return domain(format!("term count must be even in 10..=18, got {terms}"));
    }
    let (lo, hi) = problem.geometry.bounds();
    if !(lo..=hi).contains(&x) {
        return domain(format!("x = {x} outside [{lo}, {hi}]"));
    }
    let (u, v) = estimate(x, tau, problem, terms)?;
    let (u2, v2) = estimate(x, tau, problem, terms - 2)?;
    let spread = (u - u2).abs().max((v - v2).abs());
    Ok(Inversion { u, v, terms, spread, stable: spread <= tolerance })
}

/// Inversion of `1 / (s + 1)` at `tau`; returns the absolute error against `e^{-tau}`.
pub fn stehfest_self_test(tau: f64, terms: usize) -> Result<f64> {
    let approx = stehfest::invert(|s| Ok((s + 1.0).recip()), tau, terms)?;
    Ok((approx.to_f64() - (-tau).exp()).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{planar, PlanarSeries, SphericalSeries};

    #[test]
    fn self_test_meets_target() {
        assert!(stehfest_self_test(1.0, DEFAULT_STEHFEST_TERMS).unwrap() <= 1e-8);
    }

    #[test]
    fn planar_inversion_matches_series() {
        let p = DimensionlessProblem::slab(1.0, 0.1).unwrap();
        let series = PlanarSeries::from_problem(&p, 60).unwrap();
        for (x, tau) in [(0.0, 1.0), (0.5, 1.0), (1.0, 0.1), (0.3, 10.0)] {
            let inv = invert_numerically(x, tau, &p, DEFAULT_STEHFEST_TERMS, 1e-5).unwrap();
            let f = series.fields(x, tau).unwrap();
            assert!((inv.u - f.u.value).abs() < 1e-5, "u at {x},{tau}: {} vs {}", inv.u, f.u.value);
            assert!((inv.v - f.v.value).abs() < 1e-5, "v at {x},{tau}");
            assert!(inv.stable);
        }
    }

    #[test]
    fn shell_inversion_matches_series() {
        let p = DimensionlessProblem::shell(1.0, 2.0, 0.1).unwrap();
        let series = SphericalSeries::from_problem(&p, 60).unwrap();
        let inv = invert_numerically(1.5, 1.0, &p, DEFAULT_STEHFEST_TERMS, 1e-5).unwrap();
        let f = series.fields(1.5, 1.0).unwrap();
        assert!((inv.u - f.u.value).abs() < 1e-5);
        assert!((inv.v - f.v.value).abs() < 1e-5);
    }

    #[test]
    fn late_inversion_is_steady() {
        let p = DimensionlessProblem::slab(1.0, 0.1).unwrap();
        for x in [0.0, 0.6] {
            let inv = invert_numerically(x, 100.0, &p, DEFAULT_STEHFEST_TERMS, 1e-6).unwrap();
            let (u, _) = planar::steady_profile(x, 1.0).unwrap();
            assert!((inv.u - u).abs() < 1e-6);
        }
    }

    #[test]
    fn rejects_bad_term_counts() {
        let p = DimensionlessProblem::slab(1.0, 0.1).unwrap();
        assert!(invert_numerically(0.5, 1.0, &p, 11, 1e-5).is_err());
        assert!(invert_numerically(0.5, 1.0, &p, 20, 1e-5).is_err());
        assert!(invert_numerically(0.5, 0.0, &p, 14, 1e-5).is_err());
    }
}
