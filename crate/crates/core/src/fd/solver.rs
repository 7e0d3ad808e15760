//! Time marching, probes and the discrete energy audit.

use serde::{Deserialize, Serialize};

use super::assemble::{assemble_system, boundary_gradients, gamma, FdState};
use super::mesh::FdMesh;
use super::tridiag::thomas_solve;
use crate::error::{domain, Error, Result};
use crate::model::{nondimensionalize, PhysicalParams, ScaleFactors};
use crate::series::FieldSnapshot;

/// One constant-step phase: physical `dt`, used until scaled time `until_tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Phase {
    pub dt: f64,
    pub until_tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSchedule {
    pub phases: Vec<Phase>,
}

impl TimeSchedule {
    /// `dt = 3.33e-15 s` up to `tau = 0.1`, then `3.33e-12 s` up to `end_tau`.
    pub fn paper(end_tau: f64) -> Self {
        Self {
            phases: vec![Phase { dt: 3.33e-15, until_tau: 0.1 }, Phase { dt: 3.33e-12, until_tau: end_tau }],
        }
    }

    /// Fixed scaled step `dtau` up to `end_tau`.
    pub fn uniform_tau(dtau: f64, end_tau: f64, scales: &ScaleFactors) -> Self {
        Self { phases: vec![Phase { dt: scales.physical_time(dtau), until_tau: end_tau }] }
    }

    /// Same phase boundaries with every step divided by `factor`.
    pub fn refined(&self, factor: f64) -> Self {
        Self { phases: self.phases.iter().map(|p| Phase { dt: p.dt / factor, until_tau: p.until_tau }).collect() }
    }

    pub fn end_tau(&self) -> f64 {
        self.phases.last().map_or(0.0, |p| p.until_tau)
    }

    fn validate(&self) -> Result<()> {
        let mut last = 0.0;
        for p in &self.phases {
            if !(p.dt > 0.0 && p.dt.is_finite()) {
                return domain(format!("phase step must be positive, got {}", p.dt));
            }
            if !(p.until_tau > last) {
                return domain("phase end times must increase");
            }
            last = p.until_tau;
        }
        Ok(())
    }
}

/// One backward-Euler step: implicit radiation solve, then the material
/// update `theta^{n+1} = (gamma theta^n + eps kappa E^{n+1}) / (gamma + eps kappa)`.
pub fn advance(state: &FdState, mesh: &FdMesh, params: &PhysicalParams, dt: f64) -> Result<FdState> {
    let sys = assemble_system(state, mesh, params, dt)?;
    let e = thomas_solve(&sys)?;
    let g = gamma(params, dt);
    let ek = params.eps() * params.kappa;
    let theta = state.theta.iter().zip(&e).map(|(&th, &en)| (g * th + ek * en) / (g + ek)).collect();
    Ok(FdState { step: state.step + 1, time: state.time + dt, e, theta })
}

/// The two one-sided fluxes at each interior edge, built from the
/// flux-continuity edge value `E_e = (dz_{i+1} E_i + dz_i E_{i+1}) / (dz_i + dz_{i+1})`.
pub fn edge_fluxes(e: &[f64], mesh: &FdMesh, params: &PhysicalParams) -> Vec<(f64, f64)> {
    let d = params.c / (3.0 * params.kappa);
    (0..mesh.cells() - 1)
        .map(|i| {
            let (wl, wr) = (mesh.widths[i], mesh.widths[i + 1]);
            let edge = (wr * e[i] + wl * e[i + 1]) / (wl + wr);
            (-d * (edge - e[i]) / (0.5 * wl), -d * (e[i + 1] - edge) / (0.5 * wr))
        })
        .collect()
}

/// Scaled energy audit of a run. The content is `sum dx_i (eps u_i + v_i)`
/// (with `x u` in place of `u` for shells) and the boundary term is the
/// difference of the face gradients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalanceAudit {
    /// Largest per-step mismatch using the implicit (new-level) face
    /// gradients; round-off only.
    pub implicit_max: f64,
    /// Accumulated mismatch when the face gradients are integrated with the
    /// trapezoid rule over each step; first order in the step.
    pub trapezoid: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FdRun {
    pub snapshots: Vec<FieldSnapshot>,
    pub audit: BalanceAudit,
    pub final_state: FdState,
}

struct Scaled<'a> {
    mesh: &'a FdMesh,
    params: &'a PhysicalParams,
    scales: ScaleFactors,
}

impl Scaled<'_> {
    /// Length factor of the transformed variable: `w = x u = x_per_length * s * E r / r`
    /// carries one extra `x_per_length` for shells.
    fn shell_factor(&self) -> f64 {
        if self.mesh.is_shell() {
            self.scales.x_per_length
        } else {
            1.0
        }
    }

    /// Scaled gradient of the (transformed) density per unit physical gradient.
    fn gradient_unit(&self) -> f64 {
        self.scales.u_per_energy_density * self.shell_factor() / self.scales.x_per_length
    }

    /// `sum dx_i (eps u_i + v_i)` in scaled units.
    fn content(&self, s: &FdState) -> f64 {
        let eps = self.params.eps();
        let k = self.scales.x_per_length * self.scales.u_per_energy_density * self.shell_factor();
        self.mesh.widths.iter().zip(s.e.iter().zip(&s.theta)).map(|(w, (e, th))| k * w * (eps * e + th)).sum()
    }

    /// Scaled gradient at the right face minus at the left face.
    fn flux_term(&self, s: &FdState) -> f64 {
        let (left, right) = boundary_gradients(&s.e, self.mesh, self.params);
        (right - left) * self.gradient_unit()
    }

    fn snapshot(&self, s: &FdState) -> FieldSnapshot {
        let sc = &self.scales;
        let n = self.mesh.cells();
        let shell = self.mesh.is_shell();
        let x: Vec<f64> = self.mesh.centers.iter().map(|&z| sc.scaled_x(z)).collect();
        let to_scaled = |vals: &[f64]| -> Vec<f64> {
            vals.iter()
                .zip(&self.mesh.centers)
                .map(|(&q, &r)| sc.scaled_density(if shell { q / r } else { q }))
                .collect()
        };
        let u = to_scaled(&s.e);
        let v = to_scaled(&s.theta);
        // gradients of the (transformed) density at edges, averaged to centres
        let (left, right) = boundary_gradients(&s.e, self.mesh, self.params);
        let unit = self.gradient_unit();
        let mut edge = Vec::with_capacity(n + 1);
        edge.push(left * unit);
        for i in 0..n - 1 {
            edge.push((s.e[i + 1] - s.e[i]) / self.mesh.half_width(i) * unit);
        }
        edge.push(right * unit);
        let du_dx = (0..n)
            .map(|i| {
                let g = 0.5 * (edge[i] + edge[i + 1]);
                // shells: u = w / x, so u' = (w' - u) / x
                if shell {
                    (g - u[i]) / x[i]
                } else {
                    g
                }
            })
            .collect();
        let dv_dx = (0..n)
            .map(|i| {
                let (a, b) = match i {
                    0 => (0, 1),
                    _ if i == n - 1 => (n - 2, n - 1),
                    _ => (i - 1, i + 1),
                };
                (v[b] - v[a]) / (x[b] - x[a])
            })
            .collect();
        FieldSnapshot { tau: sc.scaled_tau(s.time), x, u, v, du_dx, dv_dx, tol: Vec::new() }
    }
}

/// Marches a cold medium through `schedule` and records the completed step
/// nearest to each probe time (the actual `tau` is stored in the snapshot).
pub fn run(params: &PhysicalParams, mesh: &FdMesh, schedule: &TimeSchedule, probes: &[f64]) -> Result<FdRun> {
    let (_, scales) = nondimensionalize(params)?;
    schedule.validate()?;
    if probes.windows(2).any(|w| !(w[1] > w[0])) || probes.iter().any(|&p| !(p >= 0.0)) {
        return domain("probe times must be non-negative and increasing");
    }
    if let Some(&last) = probes.last() {
        if last > schedule.end_tau() {
            return Err(Error::ScheduleExhausted { reached: schedule.end_tau(), probe: last });
        }
    }
    let view = Scaled { mesh, params, scales };
    let mut state = FdState::cold(mesh.cells());
    let mut tau = 0.0;
    let mut snapshots = Vec::with_capacity(probes.len());
    let mut pending = probes.iter().copied().peekable();
    while pending.peek() == Some(&0.0) {
        snapshots.push(view.snapshot(&state));
        pending.next();
    }
    let mut audit = BalanceAudit { implicit_max: 0.0, trapezoid: 0.0, steps: 0 };
    let mut content = view.content(&state);
    let mut flux = view.flux_term(&state);
    for phase in &schedule.phases {
        let dtau = scales.scaled_tau(phase.dt);
        while tau < phase.until_tau - 1e-9 * phase.until_tau && pending.peek().is_some() {
            let next = advance(&state, mesh, params, phase.dt)?;
            let next_tau = scales.scaled_tau(next.time);
            if next.e.iter().chain(&next.theta).any(|&q| !(q >= 0.0)) {
                return domain(format!("negative density at step {}", next.step));
            }

            let next_content = view.content(&next);
            let next_flux = view.flux_term(&next);
            let gained = next_content - content;
            let implicit = gained - dtau * next_flux;
            audit.implicit_max = audit.implicit_max.max(implicit.abs());
            audit.trapezoid += gained - 0.5 * dtau * (flux + next_flux);
            audit.steps += 1;

            while let Some(&p) = pending.peek() {
                if next_tau < p - 1e-9 * p.max(1.0) {
                    break;
                }
                let chosen = if (tau - p).abs() < (next_tau - p).abs() { &state } else { &next };
                snapshots.push(view.snapshot(chosen));
                pending.next();
            }
            state = next;
            content = next_content;
            flux = next_flux;
            tau = next_tau;
        }
    }
    if let Some(p) = pending.next() {
        return Err(Error::ScheduleExhausted { reached: tau, probe: p });
    }
    audit.trapezoid = audit.trapezoid.abs();
    Ok(FdRun { snapshots, audit, final_state: state })
}
