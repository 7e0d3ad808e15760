//! Point-by-point comparison of two field snapshots.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{AnalyticSeries, FieldSnapshot};

/// Floor of the relative-error denominator.
pub const RELATIVE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    U,
    V,
    DuDx,
    DvDx,
}

impl Quantity {
    fn pick(self, s: &FieldSnapshot) -> &[f64] {
        match self {
            Quantity::U => &s.u,
            Quantity::V => &s.v,
            Quantity::DuDx => &s.du_dx,
            Quantity::DvDx => &s.dv_dx,
        }
    }
}

/// Which error norm the verdict is taken on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Norm {
    Absolute,
    Relative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointError {
    pub x: f64,
    pub tau: f64,
    pub a: f64,
    pub b: f64,
    pub abs: f64,
    /// `|a - b| / max(|a|, |b|, 1e-12)`.
    pub rel: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub method_a: String,
    pub method_b: String,
    pub quantity: Quantity,
    pub norm: Norm,
    pub tolerance: f64,
    pub points: Vec<PointError>,
    pub max_abs: f64,
    pub max_rel: f64,
    pub mean_abs: f64,
    pub mean_rel: f64,
    pub pass: bool,
}

impl ComparisonReport {
    fn from_points(labels: (&str, &str), quantity: Quantity, norm: Norm, tolerance: f64, points: Vec<PointError>) -> Self {
        let n = points.len().max(1) as f64;
        let max_abs = points.iter().fold(0.0f64, |m, p| m.max(p.abs));
        let max_rel = points.iter().fold(0.0f64, |m, p| m.max(p.rel));
        let mean_abs = points.iter().map(|p| p.abs).sum::<f64>() / n;
        let mean_rel = points.iter().map(|p| p.rel).sum::<f64>() / n;
        let worst = match norm {
            Norm::Absolute => max_abs,
            Norm::Relative => max_rel,
        };
        ComparisonReport {
            method_a: labels.0.to_string(),
            method_b: labels.1.to_string(),
            quantity,
            norm,
            tolerance,
            points,
            max_abs,
            max_rel,
            mean_abs,
            mean_rel,
            pass: worst <= tolerance,
        }
    }

    /// Concatenates reports over several times into one verdict.
    pub fn merge(reports: &[ComparisonReport]) -> Option<ComparisonReport> {
        let first = reports.first()?;
        let points = reports.iter().flat_map(|r| r.points.iter().copied()).collect();
        Some(Self::from_points(
            (&first.method_a, &first.method_b),
            first.quantity,
            first.norm,
            first.tolerance,
            points,
        ))
    }
}

pub(crate) fn point(x: f64, tau: f64, a: f64, b: f64) -> PointError {
    let abs = (a - b).abs();
    PointError { x, tau, a, b, abs, rel: abs / a.abs().max(b.abs()).max(RELATIVE_FLOOR) }
}

/// Compares one quantity of two snapshots on a shared grid.
pub fn compare(
    a: &FieldSnapshot,
    b: &FieldSnapshot,
    labels: (&str, &str),
    quantity: Quantity,
    norm: Norm,
    tolerance: f64,
) -> Result<ComparisonReport> {
    if a.x.len() != b.x.len() {
        return Err(Error::LengthMismatch { expected: a.x.len(), found: b.x.len() });
    }
    for (index, (&xa, &xb)) in a.x.iter().zip(&b.x).enumerate() {
        if (xa - xb).abs() > 1e-12 * xa.abs().max(1.0) {
            return Err(Error::GridMismatch { index, a: xa, b: xb });
        }
    }
    let (qa, qb) = (quantity.pick(a), quantity.pick(b));
    let points = a.x.iter().enumerate().map(|(i, &x)| point(x, a.tau, qa[i], qb[i])).collect();
    Ok(ComparisonReport::from_points(labels, quantity, norm, tolerance, points))
}

/// Evaluates the series on the snapshot's own grid and time and compares.
pub fn compare_with_analytic(
    series: &AnalyticSeries,
    numerical: &FieldSnapshot,
    label: &str,
    quantity: Quantity,
    norm: Norm,
    tolerance: f64,
) -> Result<ComparisonReport> {
    let analytic = series.snapshot(&numerical.x, numerical.tau)?;
    compare(&analytic, numerical, ("analytic", label), quantity, norm, tolerance)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snap(u: Vec<f64>) -> FieldSnapshot {
        let n = u.len();
        FieldSnapshot {
            tau: 1.0,
            x: crate::linspace(0.0, 1.0, n),
            v: u.clone(),
            du_dx: vec![0.0; n],
            dv_dx: vec![0.0; n],
            tol: Vec::new(),
            u,
        }
    }

    #[test]
    fn identical_inputs_have_zero_error() {
        let a = snap(vec![0.1, 0.2, 0.3]);
        let r = compare(&a, &a, ("a", "a"), Quantity::U, Norm::Relative, 0.0).unwrap();
        assert_eq!(r.max_abs, 0.0);
        assert_eq!(r.max_rel, 0.0);
        assert!(r.pass);
    }

    #[test]
    fn relative_error_uses_larger_magnitude_and_floor() {
        let a = snap(vec![1.0, 0.0, 0.0]);
        let b = snap(vec![0.5, 1e-20, 0.0]);
        let r = compare(&a, &b, ("a", "b"), Quantity::U, Norm::Relative, 0.6).unwrap();
        assert_eq!(r.points[0].rel, 0.5);
        assert_eq!(r.points[1].rel, 1e-20 / 1e-12);
        assert_eq!(r.points[2].rel, 0.0);
        assert!(r.pass);
        assert_eq!(r.max_abs, 0.5);
        assert!((r.mean_abs - (0.5 + 1e-20) / 3.0).abs() < 1e-15);
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let a = snap(vec![0.1, 0.2, 0.3]);
        let mut b = a.clone();
        b.x[1] = 0.6;
        assert!(matches!(
            compare(&a, &b, ("a", "b"), Quantity::U, Norm::Absolute, 1.0),
            Err(Error::GridMismatch { index: 1, .. })
        ));
        let c = snap(vec![0.1, 0.2]);
        assert!(compare(&a, &c, ("a", "c"), Quantity::U, Norm::Absolute, 1.0).is_err());
    }

    #[test]
    fn merged_verdict_covers_all_points() {
        let a = snap(vec![0.1, 0.2]);
        let b = snap(vec![0.1, 0.25]);
        let good = compare(&a, &a, ("a", "b"), Quantity::U, Norm::Absolute, 0.01).unwrap();
        let bad = compare(&a, &b, ("a", "b"), Quantity::U, Norm::Absolute, 0.01).unwrap();
        let merged = ComparisonReport::merge(&[good, bad]).unwrap();
        assert_eq!(merged.points.len(), 4);
        assert!(!merged.pass);
    }
}
