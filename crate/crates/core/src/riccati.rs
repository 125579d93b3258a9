//! The complex nonlinear Riccati equation `dp/dq = P + Q p + R p^2`, its
//! linearised second-order form `u'' - T u' + S u = 0`, and residual checks
//! for candidate momentum functions.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{QhjError, Result};
use crate::systems::MomentumFunction;

pub type ComplexFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Minimum distance between a residual grid point and any pole.
pub const POLE_CUTOFF: f64 = 1e-3;

/// `|u|` below which the log-derivative oracle refuses to evaluate.
pub const NODE_CUTOFF: f64 = 1e-13;

const R_CHECK_POINTS: usize = 9;

/// Coefficients `(P, Q, R)` plus the analytic derivative `R'`, valid on an
/// open real interval where `R` does not vanish.
#[derive(Clone)]
pub struct RiccatiCoefficients {
    p: ComplexFn,
    q: ComplexFn,
    r: ComplexFn,
    r_derivative: ComplexFn,
    domain: (f64, f64),
}

impl fmt::Debug for RiccatiCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RiccatiCoefficients")
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl RiccatiCoefficients {
    pub fn new(
        p: ComplexFn,
        q: ComplexFn,
        r: ComplexFn,
        r_derivative: ComplexFn,
        domain: (f64, f64),
    ) -> Result<Self> {
        let (lo, hi) = domain;
        if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
            return Err(QhjError::InvalidConfig(format!(
                "empty Riccati domain ({lo}, {hi})"
            )));
        }
        let coeffs = RiccatiCoefficients {
            p,
            q,
            r,
            r_derivative,
            domain,
        };
        for x in interior_samples(domain, R_CHECK_POINTS) {
            if coeffs.r(Complex64::new(x, 0.0)).norm() == 0.0 {
                return Err(QhjError::VanishingR { q: x });
            }
        }
        Ok(coeffs)
    }

    pub fn p(&self, z: Complex64) -> Complex64 {
        (self.p)(z)
    }

    pub fn q(&self, z: Complex64) -> Complex64 {
        (self.q)(z)
    }

    pub fn r(&self, z: Complex64) -> Complex64 {
        (self.r)(z)
    }

    pub fn r_derivative(&self, z: Complex64) -> Complex64 {
        (self.r_derivative)(z)
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.domain.0 && x < self.domain.1
    }

    /// Right-hand side `P + Q p + R p^2`.
    pub fn rhs(&self, z: Complex64, p: Complex64) -> Complex64 {
        self.p(z) + self.q(z) * p + self.r(z) * p * p
    }
}

/// `S = P R` and `T = Q + R'/R`.
#[derive(Clone)]
pub struct LinearForm {
    s: ComplexFn,
    t: ComplexFn,
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearForm").finish_non_exhaustive()
    }
}

impl LinearForm {
    pub fn s(&self, z: Complex64) -> Complex64 {
        (self.s)(z)
    }

    pub fn t(&self, z: Complex64) -> Complex64 {
        (self.t)(z)
    }

    /// `u'' - T u' + S u` at `z`.
    pub fn residual(
        &self,
        z: Complex64,
        u: Complex64,
        u_derivative: Complex64,
        u_second: Complex64,
    ) -> Complex64 {
        u_second - self.t(z) * u_derivative + self.s(z) * u
    }
}

pub fn derive_linear_form(coeffs: &RiccatiCoefficients) -> LinearForm {
    let (p, r) = (coeffs.p.clone(), coeffs.r.clone());
    let s: ComplexFn = Arc::new(move |z| p(z) * r(z));

    let (q, r, dr) = (coeffs.q.clone(), coeffs.r.clone(), coeffs.r_derivative.clone());
    let t: ComplexFn = Arc::new(move |z| q(z) + dr(z) / r(z));

    LinearForm { s, t }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub grid: Vec<f64>,
    pub residuals: Vec<Complex64>,
    pub sup_norm: f64,
}

impl ResidualReport {
    pub fn from_parts(grid: Vec<f64>, residuals: Vec<Complex64>) -> Self {
        let sup_norm = residuals.iter().map(|r| r.norm()).fold(0.0, f64::max);
        ResidualReport {
            grid,
            residuals,
            sup_norm,
        }
    }
}

/// Residual `dp/dq - (P + Q p + R p^2)` of `momentum` on a real grid, with
/// `dp/dq` taken from the closed-form derivative.
pub fn riccati_residual(
    coeffs: &RiccatiCoefficients,
    momentum: &MomentumFunction,
    grid: &[f64],
) -> Result<ResidualReport> {
    let (lo, hi) = coeffs.domain();
    for &x in grid {
        if !coeffs.contains(x) {
            return Err(QhjError::OutsideDomain { point: x, lo, hi });
        }
        for pole in momentum.poles() {
            let distance = (Complex64::new(x, 0.0) - pole.location).norm();
            if distance < POLE_CUTOFF {
                return Err(QhjError::GridPointNearPole {
                    point: x,
                    pole: pole.location.re,
                    distance,
                });
            }
        }
    }

    let residuals = grid
        .iter()
        .map(|&x| {
            let z = Complex64::new(x, 0.0);
            momentum.derivative(z) - coeffs.rhs(z, momentum.evaluate(z))
        })
        .collect();
    Ok(ResidualReport::from_parts(grid.to_vec(), residuals))
}

/// Reconstructs the momentum function from the wave-function side:
/// `p = -(1/R) u'/u`.
pub fn log_derivative_oracle<U, D, R>(u: U, u_derivative: D, r: R, q: f64) -> Result<Complex64>
where
    U: Fn(f64) -> Complex64,
    D: Fn(f64) -> Complex64,
    R: Fn(Complex64) -> Complex64,
{
    let value = u(q);
    if value.norm() < NODE_CUTOFF {
        return Err(QhjError::EvaluationAtNode {
            q,
            magnitude: value.norm(),
        });
    }
    Ok(-(u_derivative(q) / value) / r(Complex64::new(q, 0.0)))
}

fn interior_samples((lo, hi): (f64, f64), count: usize) -> Vec<f64> {
    const FAR: f64 = 10.0;
    let a = if lo.is_finite() { lo } else { hi.min(FAR) - 2.0 * FAR };
    let b = if hi.is_finite() { hi } else { a.max(-FAR) + 2.0 * FAR };
    (1..=count)
        .map(|k| a + (b - a) * k as f64 / (count + 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const I: Complex64 = Complex64::new(0.0, 1.0);

    fn constant(c: Complex64) -> ComplexFn {
        Arc::new(move |_| c)
    }

    #[test]
    fn vanishing_r_is_rejected() {
        let zero = constant(Complex64::new(0.0, 0.0));
        let err = RiccatiCoefficients::new(zero.clone(), zero.clone(), zero.clone(), zero, (0.0, 1.0))
            .unwrap_err();
        assert!(matches!(err, QhjError::VanishingR { .. }));
    }

    #[test]
    fn r_vanishing_inside_domain_is_caught() {
        let zero = constant(Complex64::new(0.0, 0.0));
        // R = z vanishes at the midpoint sample of (-1, 1).
        let r: ComplexFn = Arc::new(|z| z);
        let err = RiccatiCoefficients::new(zero.clone(), zero.clone(), r, zero, (-1.0, 1.0)).unwrap_err();
        assert_eq!(err, QhjError::VanishingR { q: 0.0 });
    }

    #[test]
    fn linear_form_of_position_dependent_r() {
        // R = 1 + z^2, R' = 2z, P = z, Q = 3
        let coeffs = RiccatiCoefficients::new(
            Arc::new(|z| z),
            constant(Complex64::new(3.0, 0.0)),
            Arc::new(|z| 1.0 + z * z),
            Arc::new(|z| 2.0 * z),
            (f64::NEG_INFINITY, f64::INFINITY),
        )
        .unwrap();
        let form = derive_linear_form(&coeffs);
        let z = Complex64::new(0.5, 0.0);
        assert!((form.s(z) - 0.5 * 1.25).norm() < 1e-15);
        assert!((form.t(z) - (3.0 + 1.0 / 1.25)).norm() < 1e-15);
    }

    #[test]
    fn oracle_ground_state_oscillator() {
        let u = |x: f64| Complex64::new((-x * x / 2.0).exp(), 0.0);
        let du = |x: f64| Complex64::new(-x * (-x * x / 2.0).exp(), 0.0);
        let p = log_derivative_oracle(u, du, |_| -I, 0.8).unwrap();
        assert!((p - 0.8 * I).norm() < 1e-15);
    }

    #[test]
    fn oracle_plane_wave() {
        let m = 3.0;
        let u = |phi: f64| (I * m * phi).exp();
        let du = |phi: f64| I * m * (I * m * phi).exp();
        for phi in [0.0, 1.0, 4.0] {
            let p = log_derivative_oracle(u, du, |_| -I, phi).unwrap();
            assert!((p - m).norm() < 1e-14);
        }
    }

    #[test]
    fn oracle_rejects_nodes() {
        let u = |x: f64| Complex64::new(x, 0.0);
        let du = |_: f64| Complex64::new(1.0, 0.0);
        let err = log_derivative_oracle(u, du, |_| -I, 0.0).unwrap_err();
        assert!(matches!(err, QhjError::EvaluationAtNode { .. }));
    }
}
