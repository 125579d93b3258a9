mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use qhj::riccati::{derive_linear_form, log_derivative_oracle, riccati_residual, RiccatiCoefficients};
use qhj::systems::{ho_momentum, oscillator_riccati, Coordinate};
use qhj::verify::avoiding_grid;
use qhj::QhjError;
use std::sync::Arc;

use common::{any_momentum, point_away_from_poles, real_momentum};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn closed_form_matches_log_derivative(p in any_momentum(), t in 0.0f64..1.0) {
        let Some(x) = point_away_from_poles(&p, t, 0.05) else { return Ok(()) };
        let u = p.wave_function();
        let oracle = log_derivative_oracle(|q| u.value(q), |q| u.derivative(q), |z| p.riccati().r(z), x).unwrap();
        let got = p.evaluate(c(x));
        let diff = (got - oracle).norm();
        prop_assert!(diff == 0.0 || diff <= 1e-9 * oracle.norm(), "{:?} at {}: {} vs {}", p.model(), x, got, oracle);
    }

    #[test]
    fn riccati_residual_vanishes_pointwise(p in any_momentum(), t in 0.0f64..1.0) {
        let Some(x) = point_away_from_poles(&p, t, 0.05) else { return Ok(()) };
        let report = riccati_residual(p.riccati(), &p, &[x]).unwrap();
        let z = c(x);
        let value = p.evaluate(z);
        let r = p.riccati();
        let scale = p.derivative(z).norm() + r.p(z).norm() + (r.q(z) * value).norm() + (r.r(z) * value * value).norm();
        prop_assert!(report.sup_norm <= 1e-12 * scale.max(1.0));
    }

    /// `u'' - T u' + S u = 0` for the closed-form eigenfunction.
    #[test]
    fn linear_form_is_consistent(p in real_momentum(), t in 0.0f64..1.0) {
        let Some(x) = point_away_from_poles(&p, t, 0.05) else { return Ok(()) };
        let form = derive_linear_form(p.riccati());
        let [u, du, ddu] = p.wave_function().jet(x);
        let z = c(x);
        let res = form.residual(z, u, du, ddu);
        let scale = ddu.norm() + (form.t(z) * du).norm() + (form.s(z) * u).norm();
        prop_assert!(res.norm() <= 1e-11 * scale.max(f64::MIN_POSITIVE), "{:?} at {}: {}", p.model(), x, res);
    }

    #[test]
    fn shifted_separation_constant_breaks_the_equation(p in any_momentum(), shift in prop_oneof![0.01f64..1.0, -1.0f64..-0.01]) {
        let grid = avoiding_grid(&p, 200, 0.05);
        let shifted = p.shifted_riccati(shift).unwrap();
        let sup = riccati_residual(&shifted, &p, &grid).unwrap().sup_norm;
        // P moves by i*shift times a factor that is >= 1 somewhere on each grid
        let floor = match p.coordinate() {
            Coordinate::Rho => shift.abs() / p.sampling_range().1.powi(2),
            _ => shift.abs(),
        };
        prop_assert!(sup >= 0.99 * floor, "{:?}: {}", p.model(), sup);
    }
}

#[test]
fn oscillator_shift_is_uniform() {
    let p = ho_momentum(4).unwrap();
    let grid = avoiding_grid(&p, 100, 0.05);
    let shifted = p.shifted_riccati(0.01).unwrap();
    let report = riccati_residual(&shifted, &p, &grid).unwrap();
    for r in &report.residuals {
        assert!((r.norm() - 0.01).abs() < 1e-10);
    }
}

#[test]
fn vanishing_r_is_rejected() {
    let zero = Arc::new(|_: Complex64| c(0.0));
    let err = RiccatiCoefficients::new(zero.clone(), zero.clone(), zero.clone(), zero, (-1.0, 1.0)).unwrap_err();
    assert!(matches!(err, QhjError::VanishingR { .. }));
}

#[test]
fn residual_rejects_bad_grids() {
    let p = ho_momentum(2).unwrap();
    let node = p.node_locations()[0];
    assert!(matches!(
        riccati_residual(p.riccati(), &p, &[node + 1e-4]),
        Err(QhjError::GridPointNearPole { .. })
    ));
    let x = qhj::systems::hydrogen_p_x(2, 0).unwrap();
    assert!(matches!(
        riccati_residual(x.riccati(), &x, &[1.5]),
        Err(QhjError::OutsideDomain { .. })
    ));
}

#[test]
fn oracle_refuses_nodes() {
    let err = log_derivative_oracle(|_| c(0.0), |_| c(1.0), |_| c(1.0), 0.3).unwrap_err();
    assert!(matches!(err, QhjError::EvaluationAtNode { .. }));
}

#[test]
fn rhs_combines_coefficients() {
    let coeffs = oscillator_riccati(3.0).unwrap();
    let z = Complex64::new(0.4, -0.2);
    let p = Complex64::new(1.5, 0.5);
    let expected = coeffs.p(z) + coeffs.q(z) * p + coeffs.r(z) * p * p;
    assert_eq!(coeffs.rhs(z, p), expected);
}
