//! Momentum functions of the separated three-dimensional harmonic oscillator
//! and hydrogen atom, in adimensional variables with `hbar = 1`:
//!
//! | coordinate | variable           | `R`  | wave-function polynomial     |
//! |------------|--------------------|------|------------------------------|
//! | `Xi`       | `xi = s sqrt(m w)` | `-i` | `H_n`                        |
//! | `Phi`      | `phi`              | `-i` | none (`e^{i m phi}`)         |
//! | `X`        | `x = cos(theta)`   | `i`  | `Q_{l,|m|}`                  |
//! | `Rho`      | `rho = 2 alpha r`  | `-i` | `L_{n-l-1}^{2l+1}`           |
//!
//! Each [`MomentumFunction`] is a rational function of its variable. Poles
//! at wave-function nodes are simple with residue `-1/R`.

mod spectrum;

pub use spectrum::{
    angle_variable_fd_check, ho_angle, ho_energy, ho_spectrum, hydrogen_angle, hydrogen_energy,
    hydrogen_spectrum, HOQuantumNumbers, HydrogenQuantumNumbers, NamedValue, Spectrum,
    SystemQuantumNumbers,
};

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{QhjError, Result};
use crate::orthopoly::{PolyFamily, RootSet, MAX_DEGREE};
use crate::riccati::{ComplexFn, RiccatiCoefficients};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Inward offset used when an open domain end is used as a bracket.
const DOMAIN_NUDGE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Coordinate {
    Xi,
    Phi,
    X,
    Rho,
}

impl Coordinate {
    pub fn name(self) -> &'static str {
        match self {
            Coordinate::Xi => "xi",
            Coordinate::Phi => "phi",
            Coordinate::X => "x",
            Coordinate::Rho => "rho",
        }
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PoleKind {
    /// Root of the wave-function polynomial.
    Node,
    /// `x = +-1` in the polar variable.
    Boundary,
    /// `rho = 0`.
    Origin,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pole {
    pub location: Complex64,
    pub residue: Complex64,
    pub kind: PoleKind,
}

/// Quantum numbers a momentum function was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Model {
    Oscillator { n: u32 },
    Azimuthal { m: i32 },
    Polar { ell: u32, m: i32 },
    Radial { n: u32, ell: u32 },
}

impl Model {
    pub fn coordinate(self) -> Coordinate {
        match self {
            Model::Oscillator { .. } => Coordinate::Xi,
            Model::Azimuthal { .. } => Coordinate::Phi,
            Model::Polar { .. } => Coordinate::X,
            Model::Radial { .. } => Coordinate::Rho,
        }
    }
}

#[derive(Clone)]
pub struct MomentumFunction {
    model: Model,
    poles: Vec<Pole>,
    riccati: RiccatiCoefficients,
    numerator_zeros: RootSet,
}

impl fmt::Debug for MomentumFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MomentumFunction")
            .field("model", &self.model)
            .field("poles", &self.poles)
            .field("numerator_zeros", &self.numerator_zeros)
            .finish_non_exhaustive()
    }
}

/// `p(xi) = -i [xi - H_{n+1}(xi) / H_n(xi)]`.
pub fn ho_momentum(n: u32) -> Result<MomentumFunction> {
    if n > MAX_DEGREE {
        return Err(QhjError::InvalidQuantumNumbers(format!(
            "oscillator n = {n} exceeds the supported maximum {MAX_DEGREE}"
        )));
    }
    let nodes = PolyFamily::hermite(n).roots()?;
    let poles = nodes
        .roots
        .iter()
        .map(|&r| Pole {
            location: Complex64::new(r, 0.0),
            residue: -I,
            kind: PoleKind::Node,
        })
        .collect();
    MomentumFunction::assemble(
        Model::Oscillator { n },
        poles,
        oscillator_riccati(2.0 * f64::from(n) + 1.0)?,
    )
}

/// `p_phi = m`, a constant of motion.
pub fn hydrogen_p_phi(m: i32) -> MomentumFunction {
    MomentumFunction::assemble(
        Model::Azimuthal { m },
        Vec::new(),
        azimuthal_riccati(f64::from(m).powi(2)).expect("constant R = -i never vanishes"),
    )
    .expect("azimuthal model has no root finding")
}

/// `p_x = i [-l x/(1-x^2) + (l+|m|)/(1-x^2) Q_{l-1,|m|}(x)/Q_{l,|m|}(x)]`.
pub fn hydrogen_p_x(ell: u32, m: i32) -> Result<MomentumFunction> {
    let m_abs = m.unsigned_abs();
    if m_abs > ell {
        return Err(QhjError::InvalidQuantumNumbers(format!(
            "|m| <= ell is required, got ell = {ell}, m = {m}"
        )));
    }
    if ell > MAX_DEGREE {
        return Err(QhjError::InvalidQuantumNumbers(format!(
            "ell = {ell} exceeds the supported maximum {MAX_DEGREE}"
        )));
    }
    let family = PolyFamily::reduced_legendre(ell as i32, m_abs)?;
    let mut poles: Vec<Pole> = family
        .roots()?
        .roots
        .iter()
        .map(|&r| Pole {
            location: Complex64::new(r, 0.0),
            residue: I,
            kind: PoleKind::Node,
        })
        .collect();
    // -i|m| x/(1-x^2) has residue i|m|/2 at both ends; removable when m = 0.
    let boundary_residue = I * f64::from(m_abs) / 2.0;
    for end in [-1.0, 1.0] {
        poles.push(Pole {
            location: Complex64::new(end, 0.0),
            residue: boundary_residue,
            kind: PoleKind::Boundary,
        });
    }
    let l = f64::from(ell);
    MomentumFunction::assemble(
        Model::Polar { ell, m },
        poles,
        polar_riccati(l * (l + 1.0), m)?,
    )
}

/// `p_rho = i [1/2 - l/rho + L_{n-l-2}^{2l+2}(rho) / L_{n-l-1}^{2l+1}(rho)]`.
pub fn hydrogen_p_rho(n: u32, ell: u32) -> Result<MomentumFunction> {
    if n == 0 || ell >= n {
        return Err(QhjError::InvalidQuantumNumbers(format!(
            "1 <= ell + 1 <= n is required, got n = {n}, ell = {ell}"
        )));
    }
    if n - ell - 1 > MAX_DEGREE {
        return Err(QhjError::InvalidQuantumNumbers(format!(
            "radial degree n - ell - 1 = {} exceeds the supported maximum {MAX_DEGREE}",
            n - ell - 1
        )));
    }
    let family = radial_family(n, ell);
    let mut poles: Vec<Pole> = family
        .roots()?
        .roots
        .iter()
        .map(|&r| Pole {
            location: Complex64::new(r, 0.0),
            residue: -I,
            kind: PoleKind::Node,
        })
        .collect();
    if ell > 0 {
        poles.insert(
            0,
            Pole {
                location: Complex64::new(0.0, 0.0),
                residue: -I * f64::from(ell),
                kind: PoleKind::Origin,
            },
        );
    }
    let l = f64::from(ell);
    MomentumFunction::assemble(
        Model::Radial { n, ell },
        poles,
        radial_riccati(f64::from(n), l * (l + 1.0))?,
    )
}

fn radial_family(n: u32, ell: u32) -> PolyFamily {
    PolyFamily::Laguerre {
        n: (n - ell - 1) as i32,
        alpha: 2 * ell + 1,
    }
}

fn radial_numerator_family(n: u32, ell: u32) -> PolyFamily {
    PolyFamily::Laguerre {
        n: n as i32 - ell as i32 - 2,
        alpha: 2 * ell + 2,
    }
}

fn legendre_pair(ell: u32, m: i32) -> (PolyFamily, PolyFamily) {
    let m_abs = m.unsigned_abs();
    (
        PolyFamily::ReducedLegendre {
            ell: ell as i32 - 1,
            m_abs,
        },
        PolyFamily::ReducedLegendre {
            ell: ell as i32,
            m_abs,
        },
    )
}

fn constant_fn(c: Complex64) -> ComplexFn {
    Arc::new(move |_| c)
}

/// `P = i(kappa - xi^2)`, `Q = 0`, `R = -i`.
pub fn oscillator_riccati(kappa_bar: f64) -> Result<RiccatiCoefficients> {
    RiccatiCoefficients::new(
        Arc::new(move |z| I * (kappa_bar - z * z)),
        constant_fn(Complex64::new(0.0, 0.0)),
        constant_fn(-I),
        constant_fn(Complex64::new(0.0, 0.0)),
        (f64::NEG_INFINITY, f64::INFINITY),
    )
}

/// `P = i kappa_phi`, `Q = 0`, `R = -i`.
pub fn azimuthal_riccati(kappa_phi_bar: f64) -> Result<RiccatiCoefficients> {
    RiccatiCoefficients::new(
        constant_fn(I * kappa_phi_bar),
        constant_fn(Complex64::new(0.0, 0.0)),
        constant_fn(-I),
        constant_fn(Complex64::new(0.0, 0.0)),
        (0.0, 2.0 * PI),
    )
}

/// `P = -i/(1-x^2) (kappa_theta - m^2/(1-x^2))`, `Q = 2x/(1-x^2)`, `R = i`.
pub fn polar_riccati(kappa_theta_bar: f64, m: i32) -> Result<RiccatiCoefficients> {
    let m2 = f64::from(m).powi(2);
    RiccatiCoefficients::new(
        Arc::new(move |z| {
            let w = (ONE - z) * (ONE + z);
            -I / w * (kappa_theta_bar - m2 / w)
        }),
        Arc::new(|z| 2.0 * z / ((ONE - z) * (ONE + z))),
        constant_fn(I),
        constant_fn(Complex64::new(0.0, 0.0)),
        (-1.0, 1.0),
    )
}

/// `P = i(-1/4 + lambda/rho - kappa_theta/rho^2)`, `Q = -2/rho`, `R = -i`.
pub fn radial_riccati(lambda: f64, kappa_theta_bar: f64) -> Result<RiccatiCoefficients> {
    RiccatiCoefficients::new(
        Arc::new(move |z| I * (-0.25 + lambda / z - kappa_theta_bar / (z * z))),
        Arc::new(|z| -2.0 / z),
        constant_fn(-I),
        constant_fn(Complex64::new(0.0, 0.0)),
        (0.0, f64::INFINITY),
    )
}

impl MomentumFunction {
    fn assemble(model: Model, poles: Vec<Pole>, riccati: RiccatiCoefficients) -> Result<Self> {
        let mut p = MomentumFunction {
            model,
            poles,
            riccati,
            numerator_zeros: RootSet::empty(),
        };
        p.numerator_zeros = p.find_numerator_zeros();
        Ok(p)
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn coordinate(&self) -> Coordinate {
        self.model.coordinate()
    }

    pub fn label(&self) -> &'static str {
        self.coordinate().name()
    }

    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    pub fn pole_locations(&self) -> Vec<Complex64> {
        self.poles.iter().map(|p| p.location).collect()
    }

    /// Real node-pole locations, sorted ascending.
    pub fn node_locations(&self) -> Vec<f64> {
        self.poles
            .iter()
            .filter(|p| p.kind == PoleKind::Node)
            .map(|p| p.location.re)
            .collect()
    }

    pub fn riccati(&self) -> &RiccatiCoefficients {
        &self.riccati
    }

    /// Riccati coefficients with the separation constant moved off its
    /// quantised value by `shift` (the momentum function is left unchanged).
    pub fn shifted_riccati(&self, shift: f64) -> Result<RiccatiCoefficients> {
        match self.model {
            Model::Oscillator { n } => oscillator_riccati(2.0 * f64::from(n) + 1.0 + shift),
            Model::Azimuthal { m } => azimuthal_riccati(f64::from(m).powi(2) + shift),
            Model::Polar { ell, m } => {
                let l = f64::from(ell);
                polar_riccati(l * (l + 1.0) + shift, m)
            }
            Model::Radial { n, ell } => {
                let l = f64::from(ell);
                radial_riccati(f64::from(n), l * (l + 1.0) + shift)
            }
        }
    }

    /// Zeros of the momentum function on its physical domain.
    pub fn numerator_zeros(&self) -> &RootSet {
        &self.numerator_zeros
    }

    /// Polynomial whose roots are the wave-function nodes of this coordinate.
    pub fn node_polynomial(&self) -> Option<PolyFamily> {
        match self.model {
            Model::Oscillator { n } => Some(PolyFamily::hermite(n)),
            Model::Azimuthal { .. } => None,
            Model::Polar { ell, m } => Some(legendre_pair(ell, m).1),
            Model::Radial { n, ell } => Some(radial_family(n, ell)),
        }
    }

    /// Open physical domain of the variable.
    pub fn domain(&self) -> (f64, f64) {
        self.riccati.domain()
    }

    /// Finite interval containing every node, anti-node and turning point.
    pub fn sampling_range(&self) -> (f64, f64) {
        match self.model {
            Model::Oscillator { n } => {
                let b = (2.0 * f64::from(n) + 1.0).sqrt() + 2.0;
                (-b, b)
            }
            Model::Azimuthal { .. } => (0.0, 2.0 * PI),
            Model::Polar { .. } => (-1.0, 1.0),
            Model::Radial { n, .. } => (0.0, 4.0 * f64::from(n) + 4.0),
        }
    }

    /// Quantum value the action integral `J / hbar` must reproduce.
    pub fn action_target(&self) -> i64 {
        match self.model {
            Model::Oscillator { n } => i64::from(n),
            Model::Azimuthal { m } => i64::from(m),
            Model::Polar { ell, .. } => i64::from(ell),
            Model::Radial { n, .. } => i64::from(n) - 1,
        }
    }

    /// Expected number of interior wave-function nodes.
    pub fn expected_node_count(&self) -> usize {
        match self.model {
            Model::Oscillator { n } => n as usize,
            Model::Azimuthal { .. } => 0,
            Model::Polar { ell, m } => (ell - m.unsigned_abs()) as usize,
            Model::Radial { n, ell } => (n - ell - 1) as usize,
        }
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        match self.model {
            Model::Oscillator { n } => {
                let h = PolyFamily::hermite(n).eval(z);
                let h1 = PolyFamily::hermite(n + 1).eval(z);
                -I * (z - h1 / h)
            }
            Model::Azimuthal { m } => Complex64::new(f64::from(m), 0.0),
            Model::Polar { ell, m } => {
                let (lower, upper) = legendre_pair(ell, m);
                let l = f64::from(ell);
                let lm = l + f64::from(m.unsigned_abs());
                let w = (ONE - z) * (ONE + z);
                let ratio = if lower.is_zero() {
                    Complex64::new(0.0, 0.0)
                } else {
                    lower.eval(z) / upper.eval(z)
                };
                I * ((-l * z + lm * ratio) / w)
            }
            Model::Radial { n, ell } => {
                let a = radial_numerator_family(n, ell).eval(z);
                let b = radial_family(n, ell).eval(z);
                I * (0.5 - f64::from(ell) / z + a / b)
            }
        }
    }

    /// Closed-form `dp/dq`.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        match self.model {
            Model::Oscillator { n } => {
                let (hn, hn1) = (PolyFamily::hermite(n), PolyFamily::hermite(n + 1));
                let (h, dh) = (hn.eval(z), hn.eval_derivative(z));
                let (h1, dh1) = (hn1.eval(z), hn1.eval_derivative(z));
                -I * (1.0 - (dh1 * h - h1 * dh) / (h * h))
            }
            Model::Azimuthal { .. } => Complex64::new(0.0, 0.0),
            Model::Polar { ell, m } => {
                let (lower, upper) = legendre_pair(ell, m);
                let l = f64::from(ell);
                let lm = l + f64::from(m.unsigned_abs());
                let w = (ONE - z) * (ONE + z);
                let (ratio, dratio) = if lower.is_zero() {
                    (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
                } else {
                    let (a, da) = (lower.eval(z), lower.eval_derivative(z));
                    let (b, db) = (upper.eval(z), upper.eval_derivative(z));
                    (a / b, (da * b - a * db) / (b * b))
                };
                I * ((-l * (ONE + z * z) + lm * (dratio * w + 2.0 * z * ratio)) / (w * w))
            }
            Model::Radial { n, ell } => {
                let (num, den) = (radial_numerator_family(n, ell), radial_family(n, ell));
                let (a, da) = (num.eval(z), num.eval_derivative(z));
                let (b, db) = (den.eval(z), den.eval_derivative(z));
                I * (f64::from(ell) / (z * z) + (da * b - a * db) / (b * b))
            }
        }
    }

    /// `p_theta = sin(theta) p_x(cos theta)` for the polar function.
    pub fn theta_form(&self, theta: f64) -> Option<Complex64> {
        match self.model {
            Model::Polar { .. } => {
                Some(theta.sin() * self.evaluate(Complex64::new(theta.cos(), 0.0)))
            }
            _ => None,
        }
    }

    pub fn wave_function(&self) -> WaveFunction {
        WaveFunction { model: self.model }
    }

    /// Real polynomial (up to a positive factor on the domain, a multiple of
    /// `u'`) whose zeros are the zeros of the momentum function.
    pub fn numerator(&self, x: f64) -> f64 {
        match self.model {
            Model::Oscillator { n } => {
                let h = PolyFamily::hermite(n);
                h.eval_derivative(x) - x * h.eval(x)
            }
            Model::Azimuthal { m } => f64::from(m),
            Model::Polar { ell, m } => {
                let q = legendre_pair(ell, m).1;
                let m_abs = f64::from(m.unsigned_abs());
                (1.0 - x) * (1.0 + x) * q.eval_derivative(x) - m_abs * x * q.eval(x)
            }
            Model::Radial { n, ell } => {
                let l = radial_family(n, ell);
                x * l.eval_derivative(x) + (f64::from(ell) - x / 2.0) * l.eval(x)
            }
        }
    }

    /// True when the momentum function vanishes identically
    /// (`m = 0` azimuthal, `l = m = 0` polar).
    pub fn is_identically_zero(&self) -> bool {
        matches!(
            self.model,
            Model::Azimuthal { m: 0 } | Model::Polar { ell: 0, m: 0 }
        )
    }

    fn find_numerator_zeros(&self) -> RootSet {
        if self.is_identically_zero() || matches!(self.model, Model::Azimuthal { .. }) {
            return RootSet::empty();
        }
        let (lo, hi) = self.sampling_range();
        let width = hi - lo;
        let mut barriers = vec![lo + DOMAIN_NUDGE * width];
        barriers.extend(self.node_locations());
        barriers.push(hi - DOMAIN_NUDGE * width);

        let f = |x: f64| self.numerator(x);
        let roots: Vec<f64> = barriers
            .windows(2)
            .filter_map(|w| bisect_sign_change(&f, w[0], w[1]))
            .collect();
        let refined_residual = roots.iter().map(|&r| f(r).abs()).fold(0.0, f64::max);
        RootSet {
            roots,
            refined_residual,
        }
    }
}

fn bisect_sign_change(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> Option<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 || fb == 0.0 || fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Some(0.5 * (a + b))
}

/// Closed-form eigenfunction of one coordinate, with all normalisation
/// constants set to one.
#[derive(Debug, Clone, Copy)]
pub struct WaveFunction {
    model: Model,
}

impl WaveFunction {
    /// `(u, u', u'')` at a real point of the domain.
    pub fn jet(&self, q: f64) -> [Complex64; 3] {
        let re = |a: f64, b: f64, c: f64| {
            [
                Complex64::new(a, 0.0),
                Complex64::new(b, 0.0),
                Complex64::new(c, 0.0),
            ]
        };
        match self.model {
            Model::Oscillator { n } => {
                let h = PolyFamily::hermite(n);
                let (p, dp, ddp) = (
                    h.eval(q),
                    h.eval_derivative(q),
                    h.eval_second_derivative(q),
                );
                let g = (-q * q / 2.0).exp();
                re(
                    p * g,
                    (dp - q * p) * g,
                    (ddp - 2.0 * q * dp + (q * q - 1.0) * p) * g,
                )
            }
            Model::Azimuthal { m } => {
                let m = f64::from(m);
                let u = (I * m * q).exp();
                [u, I * m * u, -m * m * u]
            }
            Model::Polar { ell, m } => {
                let poly = legendre_pair(ell, m).1;
                let (p, dp, ddp) = (
                    poly.eval(q),
                    poly.eval_derivative(q),
                    poly.eval_second_derivative(q),
                );
                if m == 0 {
                    return re(p, dp, ddp);
                }
                let m_abs = f64::from(m.unsigned_abs());
                let s = (1.0 - q) * (1.0 + q);
                let w = s.powf(m_abs / 2.0);
                let g = -m_abs * q / s;
                let dg = -m_abs * (1.0 + q * q) / (s * s);
                re(
                    w * p,
                    w * (dp + g * p),
                    w * (ddp + 2.0 * g * dp + (dg + g * g) * p),
                )
            }
            Model::Radial { n, ell } => {
                let poly = radial_family(n, ell);
                let (p, dp, ddp) = (
                    poly.eval(q),
                    poly.eval_derivative(q),
                    poly.eval_second_derivative(q),
                );
                let l = f64::from(ell);
                let dh = -0.5 + l / q;
                let ddh = -l / (q * q);
                let e = (-q / 2.0).exp() * q.powi(ell as i32);
                re(
                    e * p,
                    e * (dp + dh * p),
                    e * (ddp + 2.0 * dh * dp + (ddh + dh * dh) * p),
                )
            }
        }
    }

    pub fn value(&self, q: f64) -> Complex64 {
        self.jet(q)[0]
    }

    pub fn derivative(&self, q: f64) -> Complex64 {
        self.jet(q)[1]
    }

    pub fn second_derivative(&self, q: f64) -> Complex64 {
        self.jet(q)[2]
    }

    /// Real points where `u` vanishes besides the interior nodes
    /// (`x = +-1` for `m != 0`, `rho = 0` for `l >= 1`).
    pub fn boundary_zeros(&self) -> Vec<f64> {
        match self.model {
            Model::Polar { m, .. } if m != 0 => vec![-1.0, 1.0],
            Model::Radial { ell, .. } if ell > 0 => vec![0.0],
            _ => Vec::new(),
        }
    }
}
