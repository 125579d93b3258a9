//! Closed-contour quadrature in the complex plane: action variables,
//! residues and argument-principle counting.
//!
//! Contours are counterclockwise ellipses `z(t) = c + a cos t + i b sin t`.
//! The trapezoid rule in `t` converges geometrically for integrands that are
//! analytic in a neighbourhood of the curve, so sample counts are simply
//! doubled until two successive values agree.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{QhjError, Result};
use crate::systems::{Coordinate, MomentumFunction};

/// Minimum distance between a contour and any pole of its integrand.
pub const MIN_POLE_DISTANCE: f64 = 0.05;
/// Absolute agreement required between successive sample doublings.
pub const QUADRATURE_TOLERANCE: f64 = 1e-11;
pub const MIN_SAMPLES: usize = 16;
pub const MAX_SAMPLES: usize = 1 << 16;
/// Largest distance from an integer accepted when snapping a count.
pub const SNAP_LIMIT: f64 = 0.2;
/// Default tolerance on `|J/hbar - target|`.
pub const DEFAULT_ACTION_TOLERANCE: f64 = 1e-8;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Contour {
    pub center: Complex64,
    pub radius_x: f64,
    pub radius_y: f64,
    pub samples: usize,
}

impl Contour {
    pub fn new(center: Complex64, radius_x: f64, radius_y: f64, samples: usize) -> Result<Self> {
        for (name, r) in [("radius_x", radius_x), ("radius_y", radius_y)] {
            if !(r.is_finite() && r > 0.0) {
                return Err(QhjError::InvalidContour(format!(
                    "{name} must be positive, got {r}"
                )));
            }
        }
        if !(center.re.is_finite() && center.im.is_finite()) {
            return Err(QhjError::InvalidContour(format!(
                "center must be finite, got {center}"
            )));
        }
        if samples < MIN_SAMPLES || !samples.is_power_of_two() || samples > MAX_SAMPLES {
            return Err(QhjError::InvalidContour(format!(
                "samples must be a power of two in [{MIN_SAMPLES}, {MAX_SAMPLES}], got {samples}"
            )));
        }
        Ok(Contour {
            center,
            radius_x,
            radius_y,
            samples,
        })
    }

    pub fn circle(center: Complex64, radius: f64) -> Result<Self> {
        Contour::new(center, radius, radius, MIN_SAMPLES)
    }

    pub fn ellipse(center: Complex64, radius_x: f64, radius_y: f64) -> Result<Self> {
        Contour::new(center, radius_x, radius_y, MIN_SAMPLES)
    }

    pub fn with_samples(self, samples: usize) -> Result<Self> {
        Contour::new(self.center, self.radius_x, self.radius_y, samples)
    }

    /// Same center, both semi-axes multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Contour {
            radius_x: self.radius_x * factor,
            radius_y: self.radius_y * factor,
            ..*self
        }
    }

    pub fn point(&self, t: f64) -> Complex64 {
        self.center + Complex64::new(self.radius_x * t.cos(), self.radius_y * t.sin())
    }

    pub fn velocity(&self, t: f64) -> Complex64 {
        Complex64::new(-self.radius_x * t.sin(), self.radius_y * t.cos())
    }

    /// Strictly inside the ellipse.
    pub fn encloses(&self, z: Complex64) -> bool {
        let d = z - self.center;
        (d.re / self.radius_x).powi(2) + (d.im / self.radius_y).powi(2) < 1.0
    }

    /// Euclidean distance from `z` to the curve.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        const COARSE: usize = 1024;
        let dist = |t: f64| (self.point(t) - z).norm();
        let h = TAU / COARSE as f64;
        let best = (0..COARSE)
            .map(|k| k as f64 * h)
            .min_by(|a, b| dist(*a).total_cmp(&dist(*b)))
            .unwrap_or(0.0);

        // golden-section refinement on the bracketing cell
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (best - h, best + h);
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        for _ in 0..60 {
            if dist(c) < dist(d) {
                b = d;
            } else {
                a = c;
            }
            c = b - inv_phi * (b - a);
            d = a + inv_phi * (b - a);
        }
        dist(0.5 * (a + b)).min(dist(best))
    }

    /// Fails if any pole lies closer than [`MIN_POLE_DISTANCE`] to the curve.
    pub fn check_poles(&self, poles: &[Complex64]) -> Result<()> {
        for &pole in poles {
            let distance = self.distance_to(pole);
            if distance < MIN_POLE_DISTANCE {
                return Err(QhjError::ContourTooClose {
                    pole_re: pole.re,
                    pole_im: pole.im,
                    distance,
                });
            }
        }
        Ok(())
    }
}

/// Outcome of [`integrate_closed`]: the value of `∮ f dz` (no `1/2π` factor).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quadrature {
    pub value: Complex64,
    pub samples_used: usize,
    pub converged: bool,
    pub last_change: f64,
}

/// Neumaier-compensated complex accumulator; summation order is fixed, so
/// results are reproducible for a given sample count.
#[derive(Default)]
struct CompensatedSum {
    sum: Complex64,
    compensation: Complex64,
}

impl CompensatedSum {
    fn add(&mut self, x: Complex64) {
        let re = neumaier(self.sum.re, x.re, &mut self.compensation.re);
        let im = neumaier(self.sum.im, x.im, &mut self.compensation.im);
        self.sum = Complex64::new(re, im);
    }

    fn total(&self) -> Complex64 {
        self.sum + self.compensation
    }
}

fn neumaier(sum: f64, x: f64, comp: &mut f64) -> f64 {
    let t = sum + x;
    if sum.abs() >= x.abs() {
        *comp += (sum - t) + x;
    } else {
        *comp += (x - t) + sum;
    }
    t
}

/// Trapezoid rule for `∮ f dz` on `contour`, doubling the sample count from
/// `contour.samples` until successive values differ by less than
/// [`QUADRATURE_TOLERANCE`] or [`MAX_SAMPLES`] is reached.
pub fn integrate_closed<F>(f: F, contour: &Contour) -> Quadrature
where
    F: Fn(Complex64) -> Complex64,
{
    let integrand = |t: f64| f(contour.point(t)) * contour.velocity(t);

    let mut n = contour.samples.max(MIN_SAMPLES);
    let mut acc = CompensatedSum::default();
    for k in 0..n {
        acc.add(integrand(TAU * k as f64 / n as f64));
    }
    let mut value = acc.total() * (TAU / n as f64);
    let mut last_change = f64::INFINITY;

    while n < MAX_SAMPLES {
        // the doubled grid reuses every existing node; only midpoints are new
        for k in 0..n {
            acc.add(integrand(PI * (2 * k + 1) as f64 / n as f64));
        }
        n *= 2;
        let next = acc.total() * (TAU / n as f64);
        last_change = (next - value).norm();
        value = next;
        if last_change < QUADRATURE_TOLERANCE {
            return Quadrature {
                value,
                samples_used: n,
                converged: true,
                last_change,
            };
        }
    }
    Quadrature {
        value,
        samples_used: n,
        converged: false,
        last_change,
    }
}

/// Either the per-coordinate automatic contour or a caller-supplied one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContourChoice {
    Auto,
    Explicit(Contour),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActionResult {
    pub coordinate: Coordinate,
    pub j_over_hbar: Complex64,
    pub target: i64,
    pub deviation: f64,
    pub samples_used: usize,
    pub converged: bool,
    pub contour: Contour,
}

/// Contour used when none is supplied.
///
/// * `xi`, `rho`: circle about the centroid of the declared poles, radius
///   `1.5 * (largest pole distance from the centroid) + 1`;
/// * `x`: ellipse with semi-axes `(2, 0.75)` about the origin, enclosing both
///   boundary poles `x = +-1`;
/// * `phi`: the unit circle in `w = e^{i phi}`.
pub fn auto_contour(p: &MomentumFunction) -> Contour {
    let origin = Complex64::new(0.0, 0.0);
    let contour = match p.coordinate() {
        Coordinate::X => Contour::ellipse(origin, 2.0, 0.75),
        Coordinate::Phi => Contour::circle(origin, 1.0),
        Coordinate::Xi | Coordinate::Rho => {
            let poles = p.pole_locations();
            let center = if poles.is_empty() {
                origin
            } else {
                poles.iter().sum::<Complex64>() / poles.len() as f64
            };
            let spread = poles
                .iter()
                .map(|z| (z - center).norm())
                .fold(0.0, f64::max);
            Contour::circle(center, 1.5 * spread + 1.0)
        }
    };
    contour.expect("automatic contours have positive radii")
}

/// Poles of the action integrand in the contour's own variable.
fn integrand_poles(p: &MomentumFunction) -> Vec<Complex64> {
    match p.coordinate() {
        Coordinate::Phi => vec![Complex64::new(0.0, 0.0)],
        _ => p.pole_locations(),
    }
}

/// `J/hbar = (sign / 2π) ∮ p dq`, with sign `-1` for `x = cos θ` (from
/// `dx = -sin θ dθ`) and `+1` otherwise. The azimuthal integral over one
/// period is taken on `|w| = 1` with `w = e^{i phi}`, `dphi = dw / (i w)`.
pub fn action_variable(
    p: &MomentumFunction,
    choice: ContourChoice,
    tolerance: f64,
) -> Result<ActionResult> {
    let poles = integrand_poles(p);
    let contour = match choice {
        ContourChoice::Explicit(c) => {
            c.check_poles(&poles)?;
            c
        }
        ContourChoice::Auto => {
            let c = auto_contour(p);
            match c.check_poles(&poles) {
                Ok(()) => c,
                Err(_) => {
                    let enlarged = c.scaled(2.0);
                    enlarged.check_poles(&poles)?;
                    enlarged
                }
            }
        }
    };

    let quad = match p.coordinate() {
        Coordinate::Phi => integrate_closed(|w| p.evaluate(Complex64::new(w.arg(), 0.0)) / (I * w), &contour),
        _ => integrate_closed(|z| p.evaluate(z), &contour),
    };
    let sign = if p.coordinate() == Coordinate::X {
        -1.0
    } else {
        1.0
    };
    let j = quad.value * sign / TAU;
    let target = p.action_target();
    let deviation = (j - target as f64).norm();
    Ok(ActionResult {
        coordinate: p.coordinate(),
        j_over_hbar: j,
        target,
        deviation,
        samples_used: quad.samples_used,
        converged: quad.converged && deviation < tolerance && j.im.abs() < tolerance,
        contour,
    })
}

/// `(1/2πi) ∮ f` over a circle of `radius` about a simple pole. Any other
/// declared pole must be farther than `2 * radius` from `pole`.
pub fn residue_at<F>(f: F, pole: Complex64, radius: f64, declared_poles: &[Complex64]) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    for &other in declared_poles {
        let distance = (other - pole).norm();
        if distance > 1e-12 && distance <= 2.0 * radius {
            return Err(QhjError::RadiusOverlapsPole { radius, distance });
        }
    }
    let circle = Contour::circle(pole, radius)?;
    let quad = integrate_closed(f, &circle);
    if !quad.converged {
        return Err(QhjError::NonConvergence {
            samples: quad.samples_used,
        });
    }
    Ok(quad.value / (TAU * I))
}

/// Largest radius [`residue_at`] accepts around `pole`, capped at 0.1.
pub fn safe_residue_radius(pole: Complex64, declared_poles: &[Complex64]) -> f64 {
    declared_poles
        .iter()
        .map(|&o| (o - pole).norm())
        .filter(|&d| d > 1e-12)
        .fold(0.1_f64, |r, d| r.min(0.4 * d))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArgumentCount {
    /// Zeros minus poles inside the contour.
    pub net: i64,
    /// Unsnapped `(1/2πi) ∮ f'/f`.
    pub raw: Complex64,
}

/// Argument principle: `(1/2πi) ∮ f'/f = Z - P`.
pub fn count_zeros_and_poles<F, D>(f: F, f_derivative: D, contour: &Contour) -> Result<ArgumentCount>
where
    F: Fn(Complex64) -> Complex64,
    D: Fn(Complex64) -> Complex64,
{
    let quad = integrate_closed(|z| f_derivative(z) / f(z), contour);
    if !quad.converged {
        return Err(QhjError::NonConvergence {
            samples: quad.samples_used,
        });
    }
    let raw = quad.value / (TAU * I);
    let net = raw.re.round();
    if (raw - net).norm() > SNAP_LIMIT {
        return Err(QhjError::IllConditionedContour {
            re: raw.re,
            im: raw.im,
        });
    }
    Ok(ArgumentCount {
        net: net as i64,
        raw,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArgumentCheck {
    pub contour: Contour,
    pub net: i64,
    /// Declared poles with non-zero residue inside the contour.
    pub poles_inside: usize,
    pub zeros_inside: i64,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeReport {
    pub coordinate: Coordinate,
    pub nodes: Vec<f64>,
    pub antinodes: Vec<f64>,
    pub node_count: usize,
    pub antinode_count: usize,
    pub expected_node_count: usize,
    pub interleaved: bool,
    /// `None` when the momentum function is constant.
    pub argument_principle: Option<ArgumentCheck>,
}

impl NodeReport {
    pub fn is_consistent(&self) -> bool {
        self.interleaved
            && self.node_count == self.expected_node_count
            && self.argument_principle.as_ref().is_none_or(|a| a.matches)
    }
}

/// Sorted `a` and `b` alternate strictly when merged.
pub fn strictly_interleaved(a: &[f64], b: &[f64]) -> bool {
    let mut merged: Vec<(f64, u8)> = a
        .iter()
        .map(|&x| (x, 0))
        .chain(b.iter().map(|&x| (x, 1)))
        .collect();
    merged.sort_by(|x, y| x.0.total_cmp(&y.0));
    merged
        .windows(2)
        .all(|w| w[0].1 != w[1].1 && w[0].0 < w[1].0)
}

/// Contour enclosing every node, anti-node and non-removable pole, used to
/// cross-check anti-node counts with the argument principle.
pub fn counting_contour(p: &MomentumFunction) -> Contour {
    let origin = Complex64::new(0.0, 0.0);
    match p.coordinate() {
        Coordinate::X => Contour::ellipse(origin, 2.0, 0.75).expect("fixed radii"),
        _ => {
            let mut points: Vec<f64> = p.pole_locations().iter().map(|z| z.re).collect();
            points.extend(&p.numerator_zeros().roots);
            let lo = points.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = points.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let (center, half) = if points.is_empty() {
                (0.0, 0.0)
            } else {
                ((lo + hi) / 2.0, (hi - lo) / 2.0)
            };
            Contour::circle(Complex64::new(center, 0.0), 1.5 * half + 1.0).expect("positive radius")
        }
    }
}

/// Nodes are the node-pole locations; anti-nodes are the real zeros of the
/// momentum function on its domain. The anti-node count is cross-checked
/// against the argument principle applied to `p`.
pub fn nodes_and_antinodes(p: &MomentumFunction) -> Result<NodeReport> {
    let nodes = p.node_locations();
    let antinodes = p.numerator_zeros().roots.clone();

    let argument_principle = if p.is_identically_zero() || p.coordinate() == Coordinate::Phi {
        None
    } else {
        let contour = counting_contour(p);
        let mut singular = p.pole_locations();
        singular.extend(antinodes.iter().map(|&x| Complex64::new(x, 0.0)));
        contour.check_poles(&singular)?;
        let count = count_zeros_and_poles(|z| p.evaluate(z), |z| p.derivative(z), &contour)?;
        let poles_inside = p
            .poles()
            .iter()
            .filter(|pole| pole.residue.norm() > 0.0 && contour.encloses(pole.location))
            .count();
        let zeros_inside = count.net + poles_inside as i64;
        Some(ArgumentCheck {
            contour,
            net: count.net,
            poles_inside,
            zeros_inside,
            matches: zeros_inside == antinodes.len() as i64,
        })
    };

    Ok(NodeReport {
        coordinate: p.coordinate(),
        node_count: nodes.len(),
        antinode_count: antinodes.len(),
        expected_node_count: p.expected_node_count(),
        interleaved: strictly_interleaved(&nodes, &antinodes),
        nodes,
        antinodes,
        argument_principle,
    })
}
