//! Tridiagonal systems and the Thomas algorithm.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row `i`: `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]`.
/// `lower[0]` and `upper[n-1]` are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalSystem {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl TridiagonalSystem {
    pub fn zeros(n: usize) -> Self {
        Self { lower: vec![0.0; n], diag: vec![0.0; n], upper: vec![0.0; n], rhs: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    fn off_diagonal(&self, i: usize) -> f64 {
        let n = self.len();
        let lo = if i > 0 { self.lower[i].abs() } else { 0.0 };
        let up = if i + 1 < n { self.upper[i].abs() } else { 0.0 };
        lo + up
    }

    /// First row whose diagonal does not strictly dominate, if any.
    pub fn dominance_violation(&self) -> Option<usize> {
        (0..self.len()).find(|&i| !(self.diag[i].abs() > self.off_diagonal(i)))
    }

    /// `A x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.lower[i] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.upper[i] * x[i + 1];
                }
                y
            })
            .collect()
    }
}

/// Solves a strictly diagonally dominant tridiagonal system.
pub fn thomas_solve(sys: &TridiagonalSystem) -> Result<Vec<f64>> {
    let n = sys.len();
    for len in [sys.lower.len(), sys.upper.len(), sys.rhs.len()] {
        if len != n {
            return Err(Error::LengthMismatch { expected: n, found: len });
        }
    }
    if let Some(row) = sys.dominance_violation() {
        return Err(Error::DominanceViolation { row });
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    for i in 0..n {
        let (a, prev_c, prev_d) = if i == 0 { (0.0, 0.0, 0.0) } else { (sys.lower[i], c[i - 1], d[i - 1]) };
        let m = sys.diag[i] - a * prev_c;
        c[i] = if i + 1 < n { sys.upper[i] / m } else { 0.0 };
        d[i] = (sys.rhs[i] - a * prev_d) / m;
    }
    let mut x = d;
    for i in (0..n.saturating_sub(1)).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Dense Gaussian elimination with partial pivoting.
    fn dense_solve(sys: &TridiagonalSystem) -> Vec<f64> {
        let n = sys.len();
        let mut a = vec![vec![0.0; n + 1]; n];
        for i in 0..n {
            a[i][i] = sys.diag[i];
            if i > 0 {
                a[i][i - 1] = sys.lower[i];
            }
            if i + 1 < n {
                a[i][i + 1] = sys.upper[i];
            }
            a[i][n] = sys.rhs[i];
        }
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
            a.swap(k, p);
            for i in k + 1..n {
                let f = a[i][k] / a[k][k];
                for j in k..=n {
                    a[i][j] -= f * a[k][j];
                }
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
            x[i] = (a[i][n] - s) / a[i][i];
        }
        x
    }

    fn inf_norm(v: &[f64]) -> f64 {
        v.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    #[test]
    fn identity_returns_rhs() {
        let mut sys = TridiagonalSystem::zeros(5);
        sys.diag = vec![1.0; 5];
        sys.rhs = vec![1.0, -2.0, 3.0, 0.5, 7.0];
        assert_eq!(thomas_solve(&sys).unwrap(), sys.rhs);
    }

    #[test]
    fn three_by_three_matches_inverse() {
        let sys = TridiagonalSystem {
            lower: vec![0.0, -1.0, -2.0],
            diag: vec![4.0, 5.0, 6.0],
            upper: vec![1.0, 2.0, 0.0],
            rhs: vec![1.0, 2.0, 3.0],
        };
        // Cramer's rule on the explicit 3x3 matrix
        let m = [[4.0, 1.0, 0.0], [-1.0, 5.0, 2.0], [0.0, -2.0, 6.0]];
        let det = |m: [[f64; 3]; 3]| {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let d = det(m);
        let x = thomas_solve(&sys).unwrap();
        for k in 0..3 {
            let mut mk = m;
            for r in 0..3 {
                mk[r][k] = sys.rhs[r];
            }
            assert!((x[k] - det(mk) / d).abs() < 1e-14);
        }
    }

    #[test]
    fn weak_dominance_is_rejected() {
        let sys = TridiagonalSystem {
            lower: vec![0.0, 1.0, 1.0],
            diag: vec![2.0, 2.0, 2.0],
            upper: vec![1.0, 1.0, 0.0],
            rhs: vec![1.0; 3],
        };
        assert_eq!(thomas_solve(&sys), Err(Error::DominanceViolation { row: 1 }));
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let mut sys = TridiagonalSystem::zeros(3);
        sys.diag = vec![1.0; 3];
        sys.rhs.pop();
        assert!(matches!(thomas_solve(&sys), Err(Error::LengthMismatch { .. })));
    }

    proptest! {
        #[test]
        fn random_dominant_systems_match_dense_solve(
            seed in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, 0.01f64..2.0, -10.0f64..10.0), 100)
        ) {
            let n = seed.len();
            let mut sys = TridiagonalSystem::zeros(n);
            for (i, &(l, u, margin, r)) in seed.iter().enumerate() {
                sys.lower[i] = if i > 0 { l } else { 0.0 };
                sys.upper[i] = if i + 1 < n { u } else { 0.0 };
                let sign = if margin > 1.0 { 1.0 } else { -1.0 };
                sys.diag[i] = sign * (sys.lower[i].abs() + sys.upper[i].abs() + margin);
                sys.rhs[i] = r;
            }
            let x = thomas_solve(&sys).unwrap();
            let oracle = dense_solve(&sys);
            let scale = inf_norm(&oracle).max(1.0);
            for (a, b) in x.iter().zip(&oracle) {
                prop_assert!((a - b).abs() <= 1e-12 * scale);
            }
            let residual: Vec<f64> = sys.apply(&x).iter().zip(&sys.rhs).map(|(a, b)| a - b).collect();
            prop_assert!(inf_norm(&residual) <= 1e-12 * inf_norm(&sys.rhs).max(1e-300));
        }
    }
}
