//! Benchmarks for non-equilibrium Marshak radiation diffusion in finite media.
//!
//! A constant flux enters one face of a cold, purely absorbing slab (or the
//! inner face of a spherical shell). With temperature-independent opacity and
//! a heat capacity proportional to `T^3` the coupled radiation / material
//! equations become linear, and the scaled energy densities `u(x, tau)` and
//! `v(x, tau)` are known exactly as a steady term plus a sum of decaying
//! modes, one pair of modes per root of a transcendental equation.
//!
//! The crate provides
//!
//! * [`planar`] and [`spherical`]: the residue-series solutions together with
//!   gradients, leakage currents, integrated densities and the energy-balance
//!   identity,
//! * [`fd`]: an implicit staggered-mesh finite-difference solver for the same
//!   problems, in physical units,
//! * [`verify`]: independent oracles (Gaver-Stehfest inversion of the Laplace
//!   space solution, comparison reports, root-count convergence studies),
//! * [`table`] and [`cli`]: CSV/JSON tables for every quantity, driven by the
//!   `marshak` binary.

// `!(a < b)` rejects NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fd;
pub mod model;
pub mod planar;
pub mod roots;
pub mod series;
pub mod spherical;
pub mod table;
pub mod verify;

pub use error::{Error, Result};
pub use model::{DimensionlessProblem, Geometry, PhysicalParams, PolePair, ScaleFactors};
pub use planar::PlanarSeries;
pub use roots::RootSet;
pub use series::{FieldSnapshot, SeriesValue};
pub use spherical::SphericalSeries;

/// `sqrt(3)`, ubiquitous in the Marshak boundary condition.
pub const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Default speed of light in cm/s.
pub const SPEED_OF_LIGHT_CM_S: f64 = 2.997_924_58e10;

/// Scaled times at which the default tables are evaluated.
pub const DEFAULT_TAUS: [f64; 8] = [0.01, 0.1, 0.5, 1.0, 2.5, 5.0, 10.0, 50.0];

/// Number of transcendental roots summed by default.
pub const DEFAULT_ROOTS: usize = 30;

/// `n` uniformly spaced points on `[a, b]`, both ends included exactly.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    b
                } else {
                    a + (b - a) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}
