//! Uniform staggered mesh: densities at cell centres, fluxes at cell edges.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::model::PhysicalExtent;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FdMesh {
    pub extent: PhysicalExtent,
    /// `N + 1` edge coordinates (z or r), strictly increasing.
    pub edges: Vec<f64>,
    /// `N` cell widths `dz_i`.
    pub widths: Vec<f64>,
    /// `N` cell-centre coordinates.
    pub centers: Vec<f64>,
}

impl FdMesh {
    pub fn cells(&self) -> usize {
        self.widths.len()
    }

    /// `dz_{i+1/2} = (dz_i + dz_{i+1}) / 2`, the centre-to-centre distance
    /// between cells `i` and `i + 1`.
    pub fn half_width(&self, i: usize) -> f64 {
        0.5 * (self.widths[i] + self.widths[i + 1])
    }

    pub fn length(&self) -> f64 {
        self.edges[self.cells()] - self.edges[0]
    }

    pub fn is_shell(&self) -> bool {
        matches!(self.extent, PhysicalExtent::Shell { .. })
    }
}

/// Uniform mesh of `cells` cells covering the extent exactly.
pub fn build_mesh(extent: PhysicalExtent, cells: usize) -> Result<FdMesh> {
    if cells < 3 {
        return domain(format!("mesh needs at least 3 cells, got {cells}"));
    }
    let (lo, hi) = match extent {
        PhysicalExtent::Slab { length } if length > 0.0 && length.is_finite() => (0.0, length),
        PhysicalExtent::Shell { r1, r2 } if r1 > 0.0 && r2 > r1 && r2.is_finite() => (r1, r2),
        _ => return domain(format!("invalid extent {extent:?}")),
    };
    let edges = crate::linspace(lo, hi, cells + 1);
    let widths: Vec<f64> = edges.windows(2).map(|w| w[1] - w[0]).collect();
    let centers = edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    Ok(FdMesh { extent, edges, widths, centers })
}
