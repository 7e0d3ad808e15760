//! Error of the truncated series as a function of the number of roots.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::model::DimensionlessProblem;
use crate::series::AnalyticSeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    /// Nonzero roots summed.
    pub n_roots: usize,
    /// Roots counting `beta = 0` (the steady term) as the first.
    pub n_terms: usize,
    /// Residues summed, counting the steady pole `s = 0` once.
    pub n_poles: usize,
    pub value: f64,
    /// `100 |value - reference| / |reference|`, reference = `max_roots` roots.
    pub pct_error: f64,
}

/// `u(probe)` truncated after `0..=max_roots` nonzero roots; the first row is
/// the steady term alone.
pub fn convergence_study(problem: &DimensionlessProblem, probe: (f64, f64), max_roots: usize) -> Result<Vec<ConvergenceRow>> {
    if max_roots < 6 {
        return domain(format!("convergence study needs max_roots >= 6, got {max_roots}"));
    }
    let series = AnalyticSeries::new(problem, max_roots)?;
    let (x, tau) = probe;
    let reference = series.fields(x, tau)?.u.value;
    let per_root = if problem.eps > 0.0 { 2 } else { 1 };
    (0..=max_roots)
        .map(|n| {
            let value = series.fields_truncated(x, tau, n)?.u.value;
            Ok(ConvergenceRow {
                n_roots: n,
                n_terms: n + 1,
                n_poles: 1 + per_root * n,
                value,
                pct_error: 100.0 * (value - reference).abs() / reference.abs(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_error_sequence() {
        let p = DimensionlessProblem::slab(1.0, 0.1).unwrap();
        let rows = convergence_study(&p, (0.0, 2.5), 30).unwrap();
        assert_eq!(rows.len(), 31);
        assert_eq!((rows[5].n_terms, rows[5].n_poles), (6, 11));
        assert!(rows[5].pct_error <= 0.01);
        assert_eq!(rows[30].pct_error, 0.0);
        for w in rows[1..].windows(2) {
            assert!(w[1].pct_error <= w[0].pct_error);
        }
    }

    #[test]
    fn needs_enough_roots() {
        let p = DimensionlessProblem::slab(1.0, 0.1).unwrap();
        assert!(convergence_study(&p, (0.0, 2.5), 5).is_err());
    }
}
