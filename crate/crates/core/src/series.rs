//! Modal sums shared by the planar and spherical solutions.
//!
//! A field is `steady(x) + sum_n c_n(tau) w_n phi(x; beta_n)`, where `w_n` is the
//! residue weight of pole `s_n` and `c_n` a time factor. Sums are accumulated
//! with Neumaier compensation; the truncation bound is `2 n E_n`, with `E_n`
//! an x-independent envelope of the contribution of the last root. Every slow
//! mode decays at least like `1 / beta^2`, whose tail past `n` is below `n`
//! times its last term.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{pole_pair, PolePair};
use crate::model::{DimensionlessProblem, Geometry};
use crate::planar::PlanarSeries;
use crate::roots::RootSet;
use crate::spherical::SphericalSeries;

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// A series value with its truncation bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub tol: f64,
}

/// Radiation and material values at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldPair {
    pub u: SeriesValue,
    pub v: SeriesValue,
}

/// One residue: pole `s` of root `beta`, with weight `1 / (s dD/ds)` times any
/// geometry constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub root_index: usize,
    pub beta: f64,
    pub s: f64,
    pub weight: f64,
}

/// How a mode evolves in time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeFactor {
    /// `e^{s tau}`; radiation density.
    Radiation,
    /// `(e^{s tau} - e^{-tau}) / (s + 1)`; material density written as the
    /// relaxation integral of the radiation modes, which vanishes at `tau = 0`
    /// term by term.
    Material,
    /// `e^{s tau} / (s + 1)`; the raw material residue.
    MaterialResidue,
    /// `s e^{s tau}`.
    RadiationRate,
    /// `s e^{s tau} / (s + 1)`.
    MaterialResidueRate,
}

impl TimeFactor {
    pub(crate) fn mode(self, s: f64, tau: f64) -> f64 {
        let sp1 = s + 1.0;
        match self {
            TimeFactor::Radiation => (s * tau).exp(),
            TimeFactor::Material => {
                if sp1 == 0.0 {
                    tau * (-tau).exp()
                } else {
                    (-tau).exp() * (sp1 * tau).exp_m1() / sp1
                }
            }
            TimeFactor::MaterialResidue => (s * tau).exp() / sp1,
            TimeFactor::RadiationRate => s * (s * tau).exp(),
            TimeFactor::MaterialResidueRate => s * (s * tau).exp() / sp1,
        }
    }

    /// Factor multiplying the steady term.
    pub(crate) fn steady(self, tau: f64) -> f64 {
        match self {
            TimeFactor::Radiation | TimeFactor::MaterialResidue => 1.0,
            TimeFactor::Material => -(-tau).exp_m1(),
            TimeFactor::RadiationRate | TimeFactor::MaterialResidueRate => 0.0,
        }
    }
}

/// Roots, poles and residue weights of one series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSet {
    pub roots: RootSet,
    pub poles: Vec<PolePair>,
    pub modes: Vec<Mode>,
}

impl ModeSet {
    /// Builds the residues `scale / (s dD/dbeta dbeta/ds)` for every pole.
    pub(crate) fn build(roots: RootSet, eps: f64, scale: f64, d_dbeta: impl Fn(f64) -> f64) -> Result<Self> {
        let mut poles = Vec::with_capacity(roots.len());
        let mut modes = Vec::with_capacity(2 * roots.len());
        for (root_index, &beta) in roots.roots.iter().enumerate() {
            let pair = pole_pair(beta, eps)?;
            let dd = d_dbeta(beta);
            for pole in &pair.poles {
                let denom = pole.s * dd * pole.dbeta_ds;
                if !(denom.abs() >= 1e-300) {
                    return Err(Error::DegeneratePole { beta, magnitude: (dd * pole.dbeta_ds).abs() });
                }
                modes.push(Mode { root_index, beta, s: pole.s, weight: scale / denom });
            }
            poles.push(pair);
        }
        Ok(Self { roots, poles, modes })
    }

    pub fn n_roots(&self) -> usize {
        self.roots.len()
    }

    /// Modes belonging to the first `n_roots` roots.
    pub(crate) fn leading(&self, n_roots: usize) -> impl Iterator<Item = &Mode> {
        self.modes.iter().filter(move |m| m.root_index < n_roots)
    }
}

/// `steady * time.steady(tau) + sum_modes time(s) w shape(mode)` over the
/// first `n_roots` roots, with the truncation bound from `envelope`.
pub(crate) fn modal_sum(
    set: &ModeSet,
    n_roots: usize,
    tau: f64,
    time: TimeFactor,
    steady: f64,
    shape: impl Fn(&Mode) -> f64,
    envelope: impl Fn(&Mode) -> f64,
) -> SeriesValue {
    let n_roots = n_roots.min(set.n_roots());
    let mut acc = CompensatedSum::new();
    acc.add(steady * time.steady(tau));
    let mut last = 0.0;
    for mode in set.leading(n_roots) {
        let factor = time.mode(mode.s, tau) * mode.weight;
        acc.add(factor * shape(mode));
        if mode.root_index + 1 == n_roots {
            last += (factor * envelope(mode)).abs();
        }
    }
    SeriesValue { value: acc.value(), tol: 2.0 * n_roots as f64 * last }
}

/// Fields over a spatial grid at one scaled time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSnapshot {
    pub tau: f64,
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub du_dx: Vec<f64>,
    pub dv_dx: Vec<f64>,
    /// Per-point truncation bound (largest over the four quantities); empty
    /// for numerical solutions.
    pub tol: Vec<f64>,
}

/// Either geometry's series behind one interface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AnalyticSeries {
    Planar(PlanarSeries),
    Spherical(SphericalSeries),
}

impl AnalyticSeries {
    pub fn new(problem: &DimensionlessProblem, n_roots: usize) -> Result<Self> {
        Ok(match problem.geometry {
            Geometry::Slab { .. } => AnalyticSeries::Planar(PlanarSeries::from_problem(problem, n_roots)?),
            Geometry::Shell { .. } => AnalyticSeries::Spherical(SphericalSeries::from_problem(problem, n_roots)?),
        })
    }

    pub fn n_roots(&self) -> usize {
        match self {
            AnalyticSeries::Planar(s) => s.n_roots(),
            AnalyticSeries::Spherical(s) => s.n_roots(),
        }
    }

    pub fn roots(&self) -> &RootSet {
        match self {
            AnalyticSeries::Planar(s) => s.roots(),
            AnalyticSeries::Spherical(s) => s.roots(),
        }
    }

    pub fn fields(&self, x: f64, tau: f64) -> Result<FieldPair> {
        match self {
            AnalyticSeries::Planar(s) => s.fields(x, tau),
            AnalyticSeries::Spherical(s) => s.fields(x, tau),
        }
    }

    pub fn fields_truncated(&self, x: f64, tau: f64, n_roots: usize) -> Result<FieldPair> {
        match self {
            AnalyticSeries::Planar(s) => s.fields_truncated(x, tau, n_roots),
            AnalyticSeries::Spherical(s) => s.fields_truncated(x, tau, n_roots),
        }
    }

    /// Literal residue sum for `v`; see [`PlanarSeries::material_residue_sum`].
    pub fn material_residue_sum(&self, x: f64, tau: f64) -> Result<SeriesValue> {
        match self {
            AnalyticSeries::Planar(s) => s.material_residue_sum(x, tau),
            AnalyticSeries::Spherical(s) => s.material_residue_sum(x, tau),
        }
    }

    pub fn gradients(&self, x: f64, tau: f64) -> Result<FieldPair> {
        match self {
            AnalyticSeries::Planar(s) => s.gradients(x, tau),
            AnalyticSeries::Spherical(s) => s.gradients(x, tau),
        }
    }

    pub fn snapshot(&self, xs: &[f64], tau: f64) -> Result<FieldSnapshot> {
        match self {
            AnalyticSeries::Planar(s) => s.snapshot(xs, tau),
            AnalyticSeries::Spherical(s) => s.snapshot(xs, tau),
        }
    }

    pub fn energy_balance_residual(&self, tau: f64) -> Result<f64> {
        match self {
            AnalyticSeries::Planar(s) => s.energy_balance_residual(tau),
            AnalyticSeries::Spherical(s) => s.energy_balance_residual(tau),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_lost_digits() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        let acc: CompensatedSum = xs.iter().copied().collect();
        assert_eq!(acc.value(), 2.0);
        assert_eq!(xs.iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn material_factor_vanishes_at_zero_and_matches_residue_difference() {
        for s in [-0.3, -0.999_999, -1.0, -25.0] {
            assert_eq!(TimeFactor::Material.mode(s, 0.0), 0.0);
            if s != -1.0 {
                let tau = 0.7;
                let direct = ((s * tau).exp() - (-tau).exp()) / (s + 1.0);
                assert!((TimeFactor::Material.mode(s, tau) - direct).abs() < 1e-9);
            }
        }
        assert_eq!(TimeFactor::Material.steady(0.0), 0.0);
        assert!((TimeFactor::Material.steady(50.0) - 1.0).abs() < 1e-15);
    }
}
