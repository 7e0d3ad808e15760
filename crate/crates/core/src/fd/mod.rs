//! Fully implicit staggered-mesh finite differences for the slab and shell
//! problems, in physical units.

pub mod assemble;
pub mod mesh;
pub mod solver;
pub mod tridiag;

pub use assemble::{assemble_shell_system, assemble_slab_system, assemble_system, FdState};
pub use mesh::{build_mesh, FdMesh};
pub use solver::{advance, edge_fluxes, run, BalanceAudit, FdRun, Phase, TimeSchedule};
pub use tridiag::{thomas_solve, TridiagonalSystem};
