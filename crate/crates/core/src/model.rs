//! Problem definition, unit scaling and the dispersion relation `beta(s)`.
//!
//! Both geometries share the Laplace-space wavenumber
//!
//! ```text
//! beta^2(s) = -s [1 + eps (s + 1)] / (s + 1)
//! ```
//!
//! Every positive root `beta_n` of the geometry's transcendental equation
//! maps back to the poles `s` solving `eps s^2 + (1 + eps + beta^2) s + beta^2 = 0`
//! (two real negative poles for `eps > 0`, one for `eps = 0`).

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::{SPEED_OF_LIGHT_CM_S, SQRT3};

/// Physical extent of the medium, in length units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PhysicalExtent {
    Slab { length: f64 },
    Shell { r1: f64, r2: f64 },
}

/// Dimensional inputs of the Marshak problem (CGS by convention).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Opacity, 1/length.
    pub kappa: f64,
    /// Heat-capacity coefficient in `C_v = alpha T^3`.
    pub alpha: f64,
    /// Radiation constant.
    pub a: f64,
    /// Speed of light.
    pub c: f64,
    /// Incident flux on the driven face.
    pub f_inc: f64,
    pub extent: PhysicalExtent,
}

impl PhysicalParams {
    /// Parameters with `eps = 4a/alpha` and `F_inc = c/4`, so that the scaled
    /// densities equal `E` and `aT^4` directly.
    pub fn normalized(kappa: f64, eps: f64, extent: PhysicalExtent) -> Self {
        let a = 7.5657e-15;
        Self {
            kappa,
            alpha: 4.0 * a / eps,
            a,
            c: SPEED_OF_LIGHT_CM_S,
            f_inc: SPEED_OF_LIGHT_CM_S / 4.0,
            extent,
        }
    }

    pub fn eps(&self) -> f64 {
        4.0 * self.a / self.alpha
    }

    fn validate(&self) -> Result<()> {
        let named = [
            ("kappa", self.kappa),
            ("alpha", self.alpha),
            ("a", self.a),
            ("c", self.c),
            ("f_inc", self.f_inc),
        ];
        for (name, value) in named {
            if !(value.is_finite() && value > 0.0) {
                return domain(format!("{name} must be finite and positive, got {value}"));
            }
        }
        match self.extent {
            PhysicalExtent::Slab { length } if !(length.is_finite() && length > 0.0) => {
                domain(format!("slab length must be positive, got {length}"))
            }
            PhysicalExtent::Shell { r1, r2 } if !(r1 > 0.0 && r2 > r1 && r2.is_finite()) => {
                domain(format!("shell radii must satisfy 0 < r1 < r2, got {r1}, {r2}"))
            }
            _ => {
                let eps = self.eps();
                if !(eps.is_finite() && eps > 0.0) {
                    return domain(format!("eps = 4a/alpha must be finite and positive, got {eps}"));
                }
                Ok(())
            }
        }
    }
}

/// Scaled geometry: slab thickness `b` or shell radii `x1 < x2`, all in units
/// of `1 / (sqrt(3) kappa)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Geometry {
    Slab { b: f64 },
    Shell { x1: f64, x2: f64 },
}

impl Geometry {
    /// Thickness of the medium in scaled units.
    pub fn width(&self) -> f64 {
        match *self {
            Geometry::Slab { b } => b,
            Geometry::Shell { x1, x2 } => x2 - x1,
        }
    }

    /// Scaled coordinates of the driven and the free face.
    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            Geometry::Slab { b } => (0.0, b),
            Geometry::Shell { x1, x2 } => (x1, x2),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Geometry::Slab { .. } => "slab",
            Geometry::Shell { .. } => "shell",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Geometry::Slab { b } if !(b.is_finite() && b > 0.0) => {
                domain(format!("slab thickness must be positive, got {b}"))
            }
            Geometry::Shell { x1, x2 } if !(x1 > 0.0 && x2 > x1 && x2.is_finite()) => {
                domain(format!("shell radii must satisfy 0 < x1 < x2, got {x1}, {x2}"))
            }
            _ => Ok(()),
        }
    }
}

/// Complete input of the analytic solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessProblem {
    pub geometry: Geometry,
    /// Retardation parameter; `0` selects the infinite-light-speed branch.
    pub eps: f64,
}

impl DimensionlessProblem {
    pub fn new(geometry: Geometry, eps: f64) -> Result<Self> {
        geometry.validate()?;
        if !(eps.is_finite() && eps >= 0.0) {
            return domain(format!("eps must be finite and non-negative, got {eps}"));
        }
        Ok(Self { geometry, eps })
    }

    pub fn slab(b: f64, eps: f64) -> Result<Self> {
        Self::new(Geometry::Slab { b }, eps)
    }

    pub fn shell(x1: f64, x2: f64, eps: f64) -> Result<Self> {
        Self::new(Geometry::Shell { x1, x2 }, eps)
    }
}

/// Multiplicative maps from physical to scaled quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleFactors {
    /// `x / z = sqrt(3) kappa`.
    pub x_per_length: f64,
    /// `tau / t = 4 a c kappa / alpha = eps c kappa`.
    pub tau_per_time: f64,
    /// `u / E = c / (4 F_inc)`.
    pub u_per_energy_density: f64,
}

impl ScaleFactors {
    pub fn scaled_x(&self, z: f64) -> f64 {
        z * self.x_per_length
    }
    pub fn physical_length(&self, x: f64) -> f64 {
        x / self.x_per_length
    }
    pub fn scaled_tau(&self, t: f64) -> f64 {
        t * self.tau_per_time
    }
    pub fn physical_time(&self, tau: f64) -> f64 {
        tau / self.tau_per_time
    }
    pub fn scaled_density(&self, e: f64) -> f64 {
        e * self.u_per_energy_density
    }
    pub fn physical_density(&self, u: f64) -> f64 {
        u / self.u_per_energy_density
    }
}

/// Maps physical parameters to the scaled problem and the unit factors.
pub fn nondimensionalize(p: &PhysicalParams) -> Result<(DimensionlessProblem, ScaleFactors)> {
    p.validate()?;
    let x_per_length = SQRT3 * p.kappa;
    let eps = p.eps();
    let geometry = match p.extent {
        PhysicalExtent::Slab { length } => Geometry::Slab { b: x_per_length * length },
        PhysicalExtent::Shell { r1, r2 } => Geometry::Shell {
            x1: x_per_length * r1,
            x2: x_per_length * r2,
        },
    };
    let scales = ScaleFactors {
        x_per_length,
        tau_per_time: 4.0 * p.a * p.c * p.kappa / p.alpha,
        u_per_energy_density: p.c / (4.0 * p.f_inc),
    };
    Ok((DimensionlessProblem::new(geometry, eps)?, scales))
}

/// `beta^2(s) = -s [1 + eps (s + 1)] / (s + 1)`.
pub fn beta_squared(s: f64, eps: f64) -> Result<f64> {
    if s == -1.0 {
        return Err(Error::PoleOfExpression);
    }
    Ok(-s * (1.0 + eps * (s + 1.0)) / (s + 1.0))
}

/// `d beta^2 / ds = -[1 + eps (s + 1)^2] / (s + 1)^2`, negative everywhere.
pub fn dbeta_squared_ds(s: f64, eps: f64) -> f64 {
    let sp1 = s + 1.0;
    -(1.0 + eps * sp1 * sp1) / (sp1 * sp1)
}

/// A real pole of the Laplace-space solution with the local slope of `beta(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub s: f64,
    pub dbeta_ds: f64,
}

/// The pole(s) belonging to one transcendental root `beta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolePair {
    pub beta: f64,
    /// Ordered slowest first (closest to zero).
    pub poles: Vec<Pole>,
}

/// Solves `eps s^2 + (1 + eps + beta^2) s + beta^2 = 0` for the poles of one
/// root. The larger-magnitude root is formed first and the other one from the
/// product `beta^2 / eps`, which avoids cancellation at large `beta`.
pub fn pole_pair(beta: f64, eps: f64) -> Result<PolePair> {
    if !(beta.is_finite() && beta > 0.0) {
        return domain(format!("beta must be positive, got {beta}"));
    }
    if !(eps.is_finite() && eps >= 0.0) {
        return domain(format!("eps must be non-negative, got {eps}"));
    }
    let b2 = beta * beta;
    let slopes = |s: f64| Pole { s, dbeta_ds: dbeta_squared_ds(s, eps) / (2.0 * beta) };
    if eps == 0.0 {
        return Ok(PolePair { beta, poles: vec![slopes(-b2 / (b2 + 1.0))] });
    }
    let linear = 1.0 + eps + b2;
    // (1 + eps + beta^2)^2 - 4 eps beta^2 rewritten as a sum of non-negative terms
    let shifted = b2 + 1.0 - eps;
    let disc = shifted * shifted + 4.0 * eps;
    let far = -(linear + disc.sqrt()) / (2.0 * eps);
    let near = b2 / (eps * far);
    Ok(PolePair { beta, poles: vec![slopes(near), slopes(far)] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn slab_thickness_inverts_exactly() {
        let p = PhysicalParams::normalized(100.0, 0.1, PhysicalExtent::Slab { length: 1.0 / (100.0 * SQRT3) });
        let (prob, _) = nondimensionalize(&p).unwrap();
        match prob.geometry {
            Geometry::Slab { b } => assert_relative_eq!(b, 1.0, max_relative = 1e-15),
            _ => unreachable!(),
        }
    }

    #[test]
    fn paper_time_step_maps_to_one_thousandth() {
        let p = PhysicalParams::normalized(100.0, 0.1, PhysicalExtent::Slab { length: 1e-2 });
        let (prob, scales) = nondimensionalize(&p).unwrap();
        assert_relative_eq!(prob.eps, 0.1, max_relative = 1e-14);
        let tau = scales.scaled_tau(3.33e-15);
        assert_relative_eq!(tau, 0.1 * SPEED_OF_LIGHT_CM_S * 100.0 * 3.33e-15, max_relative = 1e-14);
        assert!((tau - 9.98e-4).abs() < 1e-6);
    }

    #[test]
    fn quarter_light_speed_flux_is_unit_scale() {
        let p = PhysicalParams::normalized(100.0, 0.1, PhysicalExtent::Slab { length: 1e-2 });
        let (_, scales) = nondimensionalize(&p).unwrap();
        assert_eq!(scales.u_per_energy_density, 1.0);
    }

    #[test]
    fn rejects_non_positive_parameters() {
        let mut p = PhysicalParams::normalized(100.0, 0.1, PhysicalExtent::Slab { length: 1e-2 });
        p.kappa = 0.0;
        assert!(matches!(nondimensionalize(&p), Err(Error::Domain(_))));
        let p = PhysicalParams::normalized(100.0, 0.1, PhysicalExtent::Shell { r1: 2.0, r2: 1.0 });
        assert!(nondimensionalize(&p).is_err());
        assert!(DimensionlessProblem::slab(-1.0, 0.1).is_err());
        assert!(DimensionlessProblem::slab(1.0, -0.1).is_err());
        assert!(DimensionlessProblem::slab(1.0, 0.0).is_ok());
    }

    #[test]
    fn beta_squared_examples() {
        assert_eq!(beta_squared(0.0, 0.3).unwrap(), 0.0);
        assert_eq!(beta_squared(-0.5, 0.0).unwrap(), 1.0);
        assert_eq!(beta_squared(-1.0, 0.1), Err(Error::PoleOfExpression));
        let s = pole_pair(1.0, 0.1).unwrap().poles[0].s;
        assert!((s + 0.4875).abs() < 1e-3);
        assert_relative_eq!(beta_squared(s, 0.1).unwrap(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn pole_pair_unit_beta() {
        let pp = pole_pair(1.0, 0.1).unwrap();
        // 0.1 s^2 + 2.1 s + 1 = 0
        let d = (2.1f64 * 2.1 - 0.4).sqrt();
        assert_relative_eq!(pp.poles[0].s, (-2.1 + d) / 0.2, max_relative = 1e-12);
        assert_relative_eq!(pp.poles[1].s, (-2.1 - d) / 0.2, max_relative = 1e-12);
        assert!((pp.poles[1].s + 20.5124).abs() < 1e-4);

        let single = pole_pair(1.0, 0.0).unwrap();
        assert_eq!(single.poles.len(), 1);
        assert_eq!(single.poles[0].s, -0.5);
        assert!(pole_pair(0.0, 0.1).is_err());
    }

    #[test]
    fn scale_round_trip() {
        let p = PhysicalParams::normalized(37.0, 0.4, PhysicalExtent::Shell { r1: 0.3, r2: 0.9 });
        let (_, s) = nondimensionalize(&p).unwrap();
        for v in [1e-9, 0.3, 7.0, 1e6] {
            assert_relative_eq!(s.physical_length(s.scaled_x(v)), v, max_relative = 1e-14);
            assert_relative_eq!(s.physical_time(s.scaled_tau(v)), v, max_relative = 1e-14);
            assert_relative_eq!(s.physical_density(s.scaled_density(v)), v, max_relative = 1e-14);
        }
    }

    proptest! {
        #[test]
        fn poles_are_real_negative_and_satisfy_vieta(beta in 1e-3f64..300.0, eps in 1e-3f64..5.0) {
            let pp = pole_pair(beta, eps).unwrap();
            let (s1, s2) = (pp.poles[0].s, pp.poles[1].s);
            prop_assert!(s1 < 0.0 && s2 < 0.0 && s1 != -1.0 && s2 != -1.0);
            prop_assert!(s1 > s2);
            let b2 = beta * beta;
            prop_assert!(((s1 * s2) - b2 / eps).abs() <= 1e-12 * b2 / eps);
            prop_assert!(((s1 + s2) + (1.0 + eps + b2) / eps).abs() <= 1e-12 * (1.0 + eps + b2) / eps);
            for p in &pp.poles {
                let back = beta_squared(p.s, eps).unwrap();
                // the inverse map loses digits forming s + 1 and 1 + eps (s + 1)
                let sp1 = (p.s + 1.0).abs();
                let rel = 1e-12 + 1e-15 / sp1 + 1e-15 * eps * sp1 / (1.0 + eps * (p.s + 1.0)).abs();
                prop_assert!((back - b2).abs() <= rel * b2, "beta^2 {} vs {}", back, b2);
            }
        }

        #[test]
        fn analytic_slope_matches_centered_difference(beta in 0.05f64..60.0, eps in 0.0f64..2.0) {
            let pp = pole_pair(beta, eps).unwrap();
            for p in &pp.poles {
                // stay clear of s = 0, s = -1 and the zero of beta^2 at s = -1 - 1/eps
                let mut h = 1e-5 * (p.s + 1.0).abs().min(p.s.abs());
                if eps > 0.0 {
                    h = h.min(1e-5 * (p.s + 1.0 + 1.0 / eps).abs());
                }
                let f = |s: f64| beta_squared(s, eps).unwrap().sqrt();
                let fd = (f(p.s + h) - f(p.s - h)) / (2.0 * h);
                prop_assert!((fd - p.dbeta_ds).abs() <= 1e-6 * p.dbeta_ds.abs(),
                    "s={} fd={} analytic={}", p.s, fd, p.dbeta_ds);
            }
        }
    }
}
