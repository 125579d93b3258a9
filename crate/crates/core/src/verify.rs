//! Invariant suites run by `qhj verify`: Riccati residuals, the
//! log-derivative oracle, the linearised equation, residue law, action
//! quantisation and node accounting, swept over quantum numbers.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::contour::{
    action_variable, nodes_and_antinodes, residue_at, safe_residue_radius, ContourChoice,
};
use crate::error::Result;
use crate::riccati::{derive_linear_form, log_derivative_oracle, riccati_residual};
use crate::systems::{
    ho_momentum, hydrogen_p_phi, hydrogen_p_rho, hydrogen_p_x, MomentumFunction,
};

pub const RESIDUAL_THRESHOLD: f64 = 1e-7;
pub const ORACLE_THRESHOLD: f64 = 1e-9;
pub const LINEAR_FORM_THRESHOLD: f64 = 1e-7;
pub const RESIDUE_THRESHOLD: f64 = 1e-9;
/// Distance kept from poles and wave-function zeros when sampling.
pub const SAMPLE_EXCLUSION: f64 = 0.05;
pub const DEFAULT_GRID_POINTS: usize = 400;
pub const DEFAULT_ORACLE_POINTS: usize = 200;
pub const DEFAULT_SEED: u64 = 0x5eed_f00d;
/// Offset used to confirm a sign change of `u` across each node pole.
pub const NODE_COINCIDENCE: f64 = 1e-10;

/// Every oscillator function with `n <= ho_nmax` and every hydrogen
/// coordinate function reachable with principal number `<= hydrogen_nmax`.
pub fn momentum_sweep(ho_nmax: Option<u32>, hydrogen_nmax: Option<u32>) -> Result<Vec<MomentumFunction>> {
    let mut out = Vec::new();
    if let Some(nmax) = ho_nmax {
        for n in 0..=nmax {
            out.push(ho_momentum(n)?);
        }
    }
    if let Some(nmax) = hydrogen_nmax.filter(|&n| n >= 1) {
        let lmax = nmax as i32 - 1;
        for m in -lmax..=lmax {
            out.push(hydrogen_p_phi(m));
        }
        for ell in 0..nmax {
            for m in -(ell as i32)..=ell as i32 {
                out.push(hydrogen_p_x(ell, m)?);
            }
        }
        for n in 1..=nmax {
            for ell in 0..n {
                out.push(hydrogen_p_rho(n, ell)?);
            }
        }
    }
    Ok(out)
}

fn far_from(x: f64, points: &[f64], cutoff: f64) -> bool {
    points.iter().all(|&p| (x - p).abs() >= cutoff)
}

fn excluded_points(p: &MomentumFunction) -> Vec<f64> {
    let mut pts: Vec<f64> = p.pole_locations().iter().map(|z| z.re).collect();
    pts.extend(p.wave_function().boundary_zeros());
    pts
}

/// Uniform grid over the sampling range, `cutoff` away from the range ends,
/// poles and wave-function zeros.
pub fn avoiding_grid(p: &MomentumFunction, points: usize, cutoff: f64) -> Vec<f64> {
    let (lo, hi) = p.sampling_range();
    let (a, b) = (lo + cutoff, hi - cutoff);
    let excluded = excluded_points(p);
    (0..points)
        .map(|k| a + (b - a) * k as f64 / (points - 1) as f64)
        .filter(|&x| far_from(x, &excluded, cutoff))
        .collect()
}

/// Uniform random points with the same exclusions as [`avoiding_grid`].
pub fn random_points<R: Rng>(p: &MomentumFunction, count: usize, cutoff: f64, rng: &mut R) -> Vec<f64> {
    let (lo, hi) = p.sampling_range();
    let excluded = excluded_points(p);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = rng.gen_range(lo + cutoff..hi - cutoff);
        if far_from(x, &excluded, cutoff) {
            out.push(x);
        }
    }
    out
}

/// Sup-norm of the Riccati residual, with the separation constant shifted by
/// `kappa_shift` (zero for the quantised equation).
pub fn riccati_sup_norm(p: &MomentumFunction, kappa_shift: f64) -> Result<f64> {
    let coeffs = if kappa_shift == 0.0 {
        p.riccati().clone()
    } else {
        p.shifted_riccati(kappa_shift)?
    };
    let grid = avoiding_grid(p, DEFAULT_GRID_POINTS, SAMPLE_EXCLUSION);
    Ok(riccati_residual(&coeffs, p, &grid)?.sup_norm)
}

pub fn relative_difference(a: Complex64, b: Complex64) -> f64 {
    let diff = (a - b).norm();
    if diff == 0.0 {
        0.0
    } else {
        diff / b.norm().max(f64::MIN_POSITIVE)
    }
}

/// Worst relative difference between the closed-form momentum function and
/// `-(1/R) u'/u` at random points.
pub fn oracle_worst<R: Rng>(p: &MomentumFunction, points: usize, rng: &mut R) -> Result<f64> {
    let u = p.wave_function();
    let mut worst: f64 = 0.0;
    for x in random_points(p, points, SAMPLE_EXCLUSION, rng) {
        let oracle = log_derivative_oracle(
            |q| u.value(q),
            |q| u.derivative(q),
            |z| p.riccati().r(z),
            x,
        )?;
        worst = worst.max(relative_difference(p.evaluate(Complex64::new(x, 0.0)), oracle));
    }
    Ok(worst)
}

/// Sup-norm of `u'' - T u' + S u` with `u` scaled to unit maximum on the grid.
pub fn linear_form_sup_norm(p: &MomentumFunction) -> f64 {
    let form = derive_linear_form(p.riccati());
    let u = p.wave_function();
    let grid = avoiding_grid(p, DEFAULT_GRID_POINTS, SAMPLE_EXCLUSION);
    let jets: Vec<_> = grid.iter().map(|&x| u.jet(x)).collect();
    let scale = jets.iter().map(|j| j[0].norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    grid.iter()
        .zip(&jets)
        .map(|(&x, j)| {
            form.residual(Complex64::new(x, 0.0), j[0], j[1], j[2])
                .norm()
                / scale
        })
        .fold(0.0, f64::max)
}

/// Largest `|Res(p, node) - (-1/R(node))|` over node poles.
pub fn residue_law_worst(p: &MomentumFunction) -> Result<f64> {
    let poles = p.pole_locations();
    let mut worst: f64 = 0.0;
    for node in p.node_locations() {
        let z = Complex64::new(node, 0.0);
        let radius = safe_residue_radius(z, &poles);
        let residue = residue_at(|w| p.evaluate(w), z, radius, &poles)?;
        let expected = -1.0 / p.riccati().r(z);
        worst = worst.max((residue - expected).norm());
    }
    Ok(worst)
}

/// True when `u` changes sign (or vanishes) within [`NODE_COINCIDENCE`] of
/// every node pole.
pub fn nodes_coincide_with_wave_roots(p: &MomentumFunction) -> bool {
    let u = p.wave_function();
    p.node_locations().iter().all(|&r| {
        let a = u.value(r - NODE_COINCIDENCE).re;
        let b = u.value(r + NODE_COINCIDENCE).re;
        a == 0.0 || b == 0.0 || a.signum() != b.signum()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub cases: usize,
    pub worst: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub ho_nmax: Option<u32>,
    pub hydrogen_nmax: Option<u32>,
    pub kappa_shift: f64,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            ho_nmax: Some(10),
            hydrogen_nmax: Some(6),
            kappa_shift: 0.0,
            tolerance: 1e-8,
            seed: DEFAULT_SEED,
        }
    }
}

struct Tally {
    name: &'static str,
    threshold: f64,
    cases: usize,
    worst: f64,
    failed: bool,
}

impl Tally {
    fn new(name: &'static str, threshold: f64) -> Self {
        Tally {
            name,
            threshold,
            cases: 0,
            worst: 0.0,
            failed: false,
        }
    }

    /// Records a measured value; errors and NaN count as failures.
    fn record(&mut self, value: Result<f64>) {
        self.cases += 1;
        match value {
            Ok(v) if v.is_finite() => {
                self.worst = self.worst.max(v);
                if v >= self.threshold {
                    self.failed = true;
                }
            }
            _ => {
                self.worst = f64::INFINITY;
                self.failed = true;
            }
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name.to_owned(),
            cases: self.cases,
            worst: self.worst,
            threshold: self.threshold,
            passed: !self.failed,
        }
    }
}

pub fn run_verification(options: &VerifyOptions) -> Result<VerificationReport> {
    let sweep = momentum_sweep(options.ho_nmax, options.hydrogen_nmax)?;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);

    let mut residual = Tally::new("riccati_residual", RESIDUAL_THRESHOLD);
    let mut oracle = Tally::new("oracle_equivalence", ORACLE_THRESHOLD);
    let mut linear = Tally::new("linear_form", LINEAR_FORM_THRESHOLD);
    let mut residue = Tally::new("residue_law", RESIDUE_THRESHOLD);
    let mut action = Tally::new("action_quantization", options.tolerance);
    // worst = number of inconsistent reports; any failure trips the threshold
    let mut nodes = Tally::new("node_accounting", 0.5);

    for p in &sweep {
        residual.record(riccati_sup_norm(p, options.kappa_shift));
        oracle.record(oracle_worst(p, DEFAULT_ORACLE_POINTS, &mut rng));
        linear.record(Ok(linear_form_sup_norm(p)));
        residue.record(residue_law_worst(p));
        action.record(
            action_variable(p, ContourChoice::Auto, options.tolerance).map(|r| {
                if r.converged {
                    r.deviation.max(r.j_over_hbar.im.abs())
                } else {
                    f64::INFINITY
                }
            }),
        );
        nodes.record(nodes_and_antinodes(p).map(|report| {
            if report.is_consistent() && nodes_coincide_with_wave_roots(p) {
                0.0
            } else {
                1.0
            }
        }));
    }

    let checks: Vec<CheckResult> = [residual, oracle, linear, residue, action, nodes]
        .into_iter()
        .map(Tally::finish)
        .collect();
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerificationReport { checks, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_sizes() {
        // HO: n = 0..=2 -> 3; hydrogen nmax 2: phi m in -1..=1 (3), x: (0,0),(1,-1),(1,0),(1,1) (4),
        // rho: (1,0),(2,0),(2,1) (3)
        assert_eq!(momentum_sweep(Some(2), None).unwrap().len(), 3);
        assert_eq!(momentum_sweep(None, Some(2)).unwrap().len(), 10);
    }

    #[test]
    fn grids_avoid_poles() {
        let p = ho_momentum(3).unwrap();
        let grid = avoiding_grid(&p, 200, 0.05);
        for x in grid {
            for pole in p.node_locations() {
                assert!((x - pole).abs() >= 0.05);
            }
        }
    }

    #[test]
    fn small_sweep_passes() {
        let report = run_verification(&VerifyOptions {
            ho_nmax: Some(3),
            hydrogen_nmax: Some(3),
            ..Default::default()
        })
        .unwrap();
        assert!(report.passed, "{report:#?}");
    }

    #[test]
    fn shifted_kappa_fails_residual() {
        let report = run_verification(&VerifyOptions {
            ho_nmax: Some(2),
            hydrogen_nmax: None,
            kappa_shift: 0.01,
            ..Default::default()
        })
        .unwrap();
        assert!(!report.passed);
        let residual = report.checks.iter().find(|c| c.name == "riccati_residual").unwrap();
        assert!(!residual.passed);
        assert!(residual.worst >= 1e-3);
    }
}
