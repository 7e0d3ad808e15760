//! Backward-Euler rows of the staggered-mesh scheme.
//!
//! Interior row `i`, multiplied through by `3 kappa dz_i dz_{i-1/2}`:
//!
//! ```text
//! -E_{i-1} + [1 + r + K f] E_i - r E_{i+1} = K gamma (E_i^n + kappa theta_i^n / (gamma + eps kappa))
//! r = dz_{i-1/2} / dz_{i+1/2},  K = 3 kappa dz_i dz_{i-1/2},  f = gamma (1 + kappa / (gamma + eps kappa))
//! ```
//!
//! with `gamma = 1 / (c dt)`. The first and last rows replace the missing
//! neighbour by the discretised Marshak condition. Shell rows are the same in
//! the variables `E' = E r`, `theta' = theta r`.

use serde::{Deserialize, Serialize};

use super::mesh::FdMesh;
use super::tridiag::TridiagonalSystem;
use crate::error::{domain, Error, Result};
use crate::model::{PhysicalExtent, PhysicalParams};

/// Cell-centred unknowns at one time level. For shells these are the
/// transformed `E r` and `aT^4 r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FdState {
    pub step: usize,
    /// Physical time reached.
    pub time: f64,
    pub e: Vec<f64>,
    pub theta: Vec<f64>,
}

impl FdState {
    /// Cold medium.
    pub fn cold(cells: usize) -> Self {
        Self { step: 0, time: 0.0, e: vec![0.0; cells], theta: vec![0.0; cells] }
    }

    pub(crate) fn check(&self, mesh: &FdMesh) -> Result<()> {
        for len in [self.e.len(), self.theta.len()] {
            if len != mesh.cells() {
                return Err(Error::LengthMismatch { expected: mesh.cells(), found: len });
            }
        }
        Ok(())
    }
}

/// Marshak-row corrections: extra diagonal weight and source on the first
/// row, extra diagonal weight on the last.
struct BoundaryRows {
    first_gain: f64,
    first_source: f64,
    last_gain: f64,
}

pub(crate) fn gamma(params: &PhysicalParams, dt: f64) -> f64 {
    1.0 / (params.c * dt)
}

fn assemble(state: &FdState, mesh: &FdMesh, params: &PhysicalParams, dt: f64, bc: BoundaryRows) -> Result<TridiagonalSystem> {
    state.check(mesh)?;
    if !(dt > 0.0 && dt.is_finite()) {
        return domain(format!("time step must be positive, got {dt}"));
    }
    let n = mesh.cells();
    let (kappa, eps) = (params.kappa, params.eps());
    let g = gamma(params, dt);
    let f = g * (1.0 + kappa / (g + eps * kappa));
    let source = |i: usize| g * (state.e[i] + kappa * state.theta[i] / (g + eps * kappa));

    let mut sys = TridiagonalSystem::zeros(n);
    for i in 0..n {
        // each row is scaled by the distance to its left neighbour, or to the
        // right neighbour for the first cell
        let scale = if i == 0 { mesh.half_width(0) } else { mesh.half_width(i - 1) };
        let k = 3.0 * kappa * mesh.widths[i] * scale;
        sys.diag[i] = k * f;
        sys.rhs[i] = k * source(i);
        if i > 0 {
            sys.lower[i] = -1.0;
            sys.diag[i] += 1.0;
        }
        if i + 1 < n {
            let r = scale / mesh.half_width(i);
            sys.upper[i] = -r;
            sys.diag[i] += r;
        }
    }
    sys.diag[0] += bc.first_gain;
    sys.rhs[0] += bc.first_source;
    sys.diag[n - 1] += bc.last_gain;
    Ok(sys)
}

/// Slab system for `E^{n+1}`.
pub fn assemble_slab_system(state: &FdState, mesh: &FdMesh, params: &PhysicalParams, dt: f64) -> Result<TridiagonalSystem> {
    if mesh.is_shell() {
        return domain("slab assembly needs a slab mesh");
    }
    let n = mesh.cells();
    let kappa = params.kappa;
    let (w1, h1) = (mesh.widths[0], mesh.half_width(0));
    let (wn, hn) = (mesh.widths[n - 1], mesh.half_width(n - 2));
    let left = 1.0 / (w1 / h1 + 4.0 / (3.0 * kappa * h1));
    let right = 1.0 / (wn / hn + 4.0 / (3.0 * kappa * hn));
    let bc = BoundaryRows {
        first_gain: 2.0 * left,
        first_source: 8.0 / params.c * params.f_inc * left,
        last_gain: 2.0 * right,
    };
    assemble(state, mesh, params, dt, bc)
}

/// Shell system for `E'^{n+1} = E^{n+1} r`.
pub fn assemble_shell_system(state: &FdState, mesh: &FdMesh, params: &PhysicalParams, dt: f64) -> Result<TridiagonalSystem> {
    let (r1, r2) = match mesh.extent {
        PhysicalExtent::Shell { r1, r2 } => (r1, r2),
        PhysicalExtent::Slab { .. } => return domain("shell assembly needs a shell mesh"),
    };
    let n = mesh.cells();
    let kappa = params.kappa;
    if !(3.0 * kappa * r2 > 2.0) {
        return domain("outer Marshak row requires 3 kappa r2 > 2");
    }
    let (w1, h1) = (mesh.widths[0], mesh.half_width(0));
    let (wn, hn) = (mesh.widths[n - 1], mesh.half_width(n - 2));
    let first_gain = 2.0 * h1 * (3.0 * kappa * r1 + 2.0) / (4.0 * r1 + 3.0 * kappa * r1 * w1 + 2.0 * w1);
    let first_source = 24.0 * params.f_inc / params.c
        / (4.0 / (r1 * kappa * h1) + 3.0 * w1 / (h1 * r1) + 2.0 * w1 / (r1 * r1 * kappa * h1));
    let outer = 3.0 * kappa * r2 - 2.0;
    let last_gain = 2.0 * hn * outer / (outer * wn + 4.0 * r2);
    assemble(state, mesh, params, dt, BoundaryRows { first_gain, first_source, last_gain })
}

/// Dispatches on the mesh geometry.
pub fn assemble_system(state: &FdState, mesh: &FdMesh, params: &PhysicalParams, dt: f64) -> Result<TridiagonalSystem> {
    if mesh.is_shell() {
        assemble_shell_system(state, mesh, params, dt)
    } else {
        assemble_slab_system(state, mesh, params, dt)
    }
}

/// Outward-normal gradients `dE/dz` (or `dE'/dr`) at the two boundary faces
/// implied by the discretised Marshak rows.
pub(crate) fn boundary_gradients(e: &[f64], mesh: &FdMesh, params: &PhysicalParams) -> (f64, f64) {
    let n = mesh.cells();
    let kappa = params.kappa;
    let (w1, wn) = (mesh.widths[0], mesh.widths[n - 1]);
    let drive = 4.0 * params.f_inc / params.c;
    match mesh.extent {
        PhysicalExtent::Slab { .. } => {
            let left = (e[0] - drive) / (0.5 * w1 + 2.0 / (3.0 * kappa));
            let right = -e[n - 1] / (0.5 * wn + 2.0 / (3.0 * kappa));
            (left, right)
        }
        PhysicalExtent::Shell { r1, r2 } => {
            let inner = 3.0 * kappa * r1 + 2.0;
            let left = 2.0 * (inner * e[0] - 3.0 * kappa * r1 * r1 * drive) / (inner * w1 + 4.0 * r1);
            let outer = 3.0 * kappa * r2 - 2.0;
            let right = -2.0 * outer * e[n - 1] / (outer * wn + 4.0 * r2);
            (left, right)
        }
    }
}
