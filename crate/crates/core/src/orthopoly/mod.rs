//! Hermite, reduced associated Legendre and associated Laguerre polynomials.
//!
//! All three families are evaluated by their forward three-term recurrences
//! started from `p_{-1} = 0`, which makes the degree `-1` member of each
//! family the identically-zero polynomial. Derivatives use the exact family
//! identities:
//!
//! * `H_n' = 2n H_{n-1}`
//! * `d/dx Q_{l,m} = Q_{l,m+1}`, since `Q_{l,m}` is the `m`-th derivative of
//!   the Legendre polynomial `P_l`
//! * `d/dx L_n^a = -L_{n-1}^{a+1}`
//!
//! `Q_{l,m}(x) = P_l^m(x) / (1 - x^2)^{m/2}` is the reduced associated
//! Legendre polynomial, with the Ferrers phase convention (no Condon-Shortley
//! factor), so that `Q_{m,m} = (2m - 1)!!`.

mod tridiagonal;

pub use tridiagonal::symmetric_tridiagonal_eigenvalues;

use std::ops::{Add, Div, Mul, Sub};

use serde::Serialize;

use crate::error::{QhjError, Result};

/// Highest degree accepted by [`PolyFamily::roots`].
pub const MAX_DEGREE: u32 = 100;

const NEWTON_STEPS: usize = 5;

/// Field over which the recurrences are evaluated (`f64` or `Complex64`).
pub trait Scalar:
    Copy
    + From<f64>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
}

impl<T> Scalar for T where
    T: Copy
        + From<f64>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Mul<f64, Output = T>
        + Div<f64, Output = T>
{
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PolyFamily {
    /// Physicists' Hermite polynomial `H_n`.
    Hermite { n: u32 },
    /// `Q_{ell,m_abs}`, of degree `ell - m_abs`; `ell = m_abs - 1` is the zero polynomial.
    ReducedLegendre { ell: i32, m_abs: u32 },
    /// Associated Laguerre `L_n^alpha`; `n = -1` is the zero polynomial.
    Laguerre { n: i32, alpha: u32 },
}

/// Sorted real roots of a polynomial together with the largest `|p(root)|`
/// left after Newton refinement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootSet {
    pub roots: Vec<f64>,
    pub refined_residual: f64,
}

impl RootSet {
    pub fn empty() -> Self {
        RootSet {
            roots: Vec::new(),
            refined_residual: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

impl PolyFamily {
    pub fn hermite(n: u32) -> Self {
        PolyFamily::Hermite { n }
    }

    pub fn reduced_legendre(ell: i32, m_abs: u32) -> Result<Self> {
        if i64::from(ell) < i64::from(m_abs) - 1 {
            return Err(QhjError::InvalidFamily(format!(
                "reduced Legendre needs ell >= |m| - 1, got ell = {ell}, |m| = {m_abs}"
            )));
        }
        Ok(PolyFamily::ReducedLegendre { ell, m_abs })
    }

    pub fn laguerre(n: i32, alpha: u32) -> Result<Self> {
        if n < -1 {
            return Err(QhjError::InvalidFamily(format!(
                "Laguerre index must be >= -1, got {n}"
            )));
        }
        Ok(PolyFamily::Laguerre { n, alpha })
    }

    /// Polynomial degree, or `None` for the identically-zero member.
    pub fn degree(&self) -> Option<u32> {
        let d = match *self {
            PolyFamily::Hermite { n } => i64::from(n),
            PolyFamily::ReducedLegendre { ell, m_abs } => i64::from(ell) - i64::from(m_abs),
            PolyFamily::Laguerre { n, .. } => i64::from(n),
        };
        u32::try_from(d).ok()
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// The member of the same family one degree lower.
    pub fn lower(&self) -> Self {
        match *self {
            PolyFamily::Hermite { n } => {
                // H_{-1} is not a family member; the zero Laguerre stands in.
                match n.checked_sub(1) {
                    Some(n) => PolyFamily::Hermite { n },
                    None => PolyFamily::Laguerre { n: -1, alpha: 0 },
                }
            }
            PolyFamily::ReducedLegendre { ell, m_abs } => PolyFamily::ReducedLegendre {
                ell: ell - 1,
                m_abs,
            },
            PolyFamily::Laguerre { n, alpha } => PolyFamily::Laguerre { n: n - 1, alpha },
        }
    }

    pub fn eval<T: Scalar>(&self, z: T) -> T {
        match *self {
            PolyFamily::Hermite { n } => hermite(i64::from(n), z),
            PolyFamily::ReducedLegendre { ell, m_abs } => reduced_legendre(ell, m_abs, z),
            PolyFamily::Laguerre { n, alpha } => laguerre(i64::from(n), f64::from(alpha), z),
        }
    }

    pub fn eval_derivative<T: Scalar>(&self, z: T) -> T {
        match *self {
            PolyFamily::Hermite { n } => hermite(i64::from(n) - 1, z) * (2.0 * f64::from(n)),
            PolyFamily::ReducedLegendre { ell, m_abs } => reduced_legendre(ell, m_abs + 1, z),
            PolyFamily::Laguerre { n, alpha } => {
                laguerre(i64::from(n) - 1, f64::from(alpha) + 1.0, z) * -1.0
            }
        }
    }

    pub fn eval_second_derivative<T: Scalar>(&self, z: T) -> T {
        match *self {
            PolyFamily::Hermite { n } => {
                let n = f64::from(n);
                hermite(n as i64 - 2, z) * (4.0 * n * (n - 1.0))
            }
            PolyFamily::ReducedLegendre { ell, m_abs } => reduced_legendre(ell, m_abs + 2, z),
            PolyFamily::Laguerre { n, alpha } => laguerre(i64::from(n) - 2, f64::from(alpha) + 2.0, z),
        }
    }

    /// Symmetric tridiagonal Jacobi matrix of the orthonormalised family, as
    /// `(diagonal, off_diagonal)`. Its eigenvalues are the polynomial roots.
    pub fn jacobi_matrix(&self) -> (Vec<f64>, Vec<f64>) {
        let d = self.degree().unwrap_or(0) as usize;
        match *self {
            PolyFamily::Hermite { .. } => (
                vec![0.0; d],
                (1..d).map(|k| (k as f64 / 2.0).sqrt()).collect(),
            ),
            PolyFamily::Laguerre { alpha, .. } => {
                let a = f64::from(alpha);
                (
                    (0..d).map(|k| 2.0 * k as f64 + a + 1.0).collect(),
                    (1..d).map(|k| (k as f64 * (k as f64 + a)).sqrt()).collect(),
                )
            }
            PolyFamily::ReducedLegendre { m_abs, .. } => {
                // Q_{l,m} is proportional to the Gegenbauer polynomial C_{l-m}^{(m+1/2)}.
                let lambda = f64::from(m_abs) + 0.5;
                (
                    vec![0.0; d],
                    (1..d)
                        .map(|k| {
                            let k = k as f64;
                            (k * (k + 2.0 * lambda - 1.0)
                                / (4.0 * (k + lambda) * (k + lambda - 1.0)))
                                .sqrt()
                        })
                        .collect(),
                )
            }
        }
    }

    /// All (real, simple) roots, sorted ascending.
    pub fn roots(&self) -> Result<RootSet> {
        let degree = self.degree().ok_or(QhjError::ZeroPolynomial)?;
        if degree > MAX_DEGREE {
            return Err(QhjError::DegreeTooLarge {
                degree,
                max: MAX_DEGREE,
            });
        }
        if degree == 0 {
            return Ok(RootSet::empty());
        }

        let (diag, off) = self.jacobi_matrix();
        let mut roots = symmetric_tridiagonal_eigenvalues(&diag, &off)?;
        for root in roots.iter_mut() {
            *root = self.newton_polish(*root);
        }
        roots.sort_by(f64::total_cmp);
        let refined_residual = roots
            .iter()
            .map(|&r| self.eval(r).abs())
            .fold(0.0, f64::max);
        Ok(RootSet {
            roots,
            refined_residual,
        })
    }

    fn newton_polish(&self, mut x: f64) -> f64 {
        for _ in 0..NEWTON_STEPS {
            let p = self.eval(x);
            let dp = self.eval_derivative(x);
            if p == 0.0 || dp == 0.0 || !dp.is_finite() {
                break;
            }
            let step = p / dp;
            let next = x - step;
            if !next.is_finite() || self.eval(next).abs() > p.abs() {
                break;
            }
            x = next;
            if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
                break;
            }
        }
        x
    }
}

fn hermite<T: Scalar>(n: i64, z: T) -> T {
    let mut prev = T::from(0.0);
    let mut cur = T::from(1.0);
    if n < 0 {
        return prev;
    }
    for j in 0..n {
        let next = z * cur * 2.0 - prev * (2.0 * j as f64);
        prev = cur;
        cur = next;
    }
    cur
}

fn laguerre<T: Scalar>(n: i64, alpha: f64, z: T) -> T {
    let mut prev = T::from(0.0);
    let mut cur = T::from(1.0);
    if n < 0 {
        return prev;
    }
    for j in 0..n {
        let j = j as f64;
        let next = ((T::from(2.0 * j + 1.0 + alpha) - z) * cur - prev * (j + alpha)) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

fn reduced_legendre<T: Scalar>(ell: i32, m_abs: u32, z: T) -> T {
    let ell = i64::from(ell);
    let m = i64::from(m_abs);
    if ell < m {
        return T::from(0.0);
    }
    let mut prev = T::from(0.0);
    let mut cur = T::from(double_factorial(2 * m - 1));
    for l in m..ell {
        let next = (z * cur * (2 * l + 1) as f64 - prev * (l + m) as f64) / (l - m + 1) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

fn double_factorial(k: i64) -> f64 {
    let mut acc = 1.0;
    let mut j = k;
    while j > 1 {
        acc *= j as f64;
        j -= 2;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn hermite_values() {
        let h0 = PolyFamily::hermite(0);
        assert_eq!(h0.eval(Complex64::new(0.7, 0.0)), Complex64::new(1.0, 0.0));
        // H_3 = 8x^3 - 12x
        assert_eq!(PolyFamily::hermite(3).eval(1.0), -4.0);
        assert_eq!(PolyFamily::hermite(3).eval_derivative(0.0), -12.0);
        for z in [-3.0, 0.1, 2.5] {
            assert_eq!(PolyFamily::hermite(1).eval_derivative(z), 2.0);
        }
    }

    #[test]
    fn zero_polynomial_conventions() {
        let l = PolyFamily::laguerre(-1, 5).unwrap();
        assert_eq!(l.eval(Complex64::new(2.3, 0.0)), Complex64::new(0.0, 0.0));
        assert!(l.is_zero());
        let q = PolyFamily::reduced_legendre(2, 3).unwrap();
        assert_eq!(q.eval(0.4), 0.0);
        assert_eq!(q.roots(), Err(QhjError::ZeroPolynomial));
        assert!(PolyFamily::laguerre(-2, 0).is_err());
        assert!(PolyFamily::reduced_legendre(1, 3).is_err());
    }

    #[test]
    fn laguerre_values() {
        // L_1^1 = 2 - x
        let l = PolyFamily::laguerre(1, 1).unwrap();
        assert_eq!(l.eval(0.0), 2.0);
        assert_eq!(l.eval_derivative(0.0), -1.0);
        // L_2^a = (x^2 - 2(a+2)x + (a+1)(a+2)) / 2
        let l2 = PolyFamily::laguerre(2, 3).unwrap();
        let x: f64 = 1.7;
        assert!(close(l2.eval(x), (x * x - 10.0 * x + 20.0) / 2.0, 1e-14));
    }

    #[test]
    fn reduced_legendre_low_orders() {
        // Q_{l,0} = P_l; Q_{1,1} = 1; Q_{2,1} = 3x; Q_{2,2} = 3; Q_{3,1} = (15x^2 - 3)/2
        let x: f64 = 0.37;
        let q = |l, m| PolyFamily::reduced_legendre(l, m).unwrap().eval(x);
        assert!(close(q(3, 0), (5.0 * x.powi(3) - 3.0 * x) / 2.0, 1e-14));
        assert_eq!(q(1, 1), 1.0);
        assert!(close(q(2, 1), 3.0 * x, 1e-14));
        assert_eq!(q(2, 2), 3.0);
        assert!(close(q(3, 1), (15.0 * x * x - 3.0) / 2.0, 1e-14));
    }

    #[test]
    fn root_examples() {
        let h3 = PolyFamily::hermite(3).roots().unwrap();
        let s = 1.5f64.sqrt();
        assert_eq!(h3.len(), 3);
        assert!((h3.roots[0] + s).abs() < 1e-14);
        assert!(h3.roots[1].abs() < 1e-14);
        assert!((h3.roots[2] - s).abs() < 1e-14);

        let p3 = PolyFamily::reduced_legendre(3, 0).unwrap().roots().unwrap();
        let s = 0.6f64.sqrt();
        assert!((p3.roots[0] + s).abs() < 1e-14);
        assert!(p3.roots[1].abs() < 1e-14);
        assert!((p3.roots[2] - s).abs() < 1e-14);

        assert!(PolyFamily::hermite(0).roots().unwrap().is_empty());

        // L_1^1 = 2 - x
        let l = PolyFamily::laguerre(1, 1).unwrap().roots().unwrap();
        assert!((l.roots[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn degree_cap() {
        assert!(PolyFamily::hermite(100).roots().is_ok());
        assert_eq!(
            PolyFamily::hermite(101).roots(),
            Err(QhjError::DegreeTooLarge {
                degree: 101,
                max: MAX_DEGREE
            })
        );
    }

    #[test]
    fn second_derivative_identity() {
        // H_4 = 16x^4 - 48x^2 + 12, H_4'' = 192x^2 - 96
        let x: f64 = 0.9;
        assert!(close(
            PolyFamily::hermite(4).eval_second_derivative(x),
            192.0 * x * x - 96.0,
            1e-14
        ));
        // L_2^0'' = 1
        assert!(close(
            PolyFamily::laguerre(2, 0).unwrap().eval_second_derivative(x),
            1.0,
            1e-14
        ));
    }
}
