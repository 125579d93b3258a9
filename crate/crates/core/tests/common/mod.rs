#![allow(dead_code)]

use proptest::prelude::*;
use qhj::systems::{ho_momentum, hydrogen_p_phi, hydrogen_p_rho, hydrogen_p_x, MomentumFunction};

pub fn oscillator() -> impl Strategy<Value = MomentumFunction> {
    (0u32..=20).prop_map(|n| ho_momentum(n).unwrap())
}

pub fn polar() -> impl Strategy<Value = MomentumFunction> {
    (0u32..=9)
        .prop_flat_map(|ell| (Just(ell), -(ell as i32)..=ell as i32))
        .prop_map(|(ell, m)| hydrogen_p_x(ell, m).unwrap())
}

pub fn radial() -> impl Strategy<Value = MomentumFunction> {
    (1u32..=10)
        .prop_flat_map(|n| (Just(n), 0..n))
        .prop_map(|(n, ell)| hydrogen_p_rho(n, ell).unwrap())
}

pub fn azimuthal() -> impl Strategy<Value = MomentumFunction> {
    (-9i32..=9).prop_map(hydrogen_p_phi)
}

/// Coordinates with a real-valued eigenfunction.
pub fn real_momentum() -> impl Strategy<Value = MomentumFunction> {
    prop_oneof![oscillator(), polar(), radial()]
}

pub fn any_momentum() -> impl Strategy<Value = MomentumFunction> {
    prop_oneof![oscillator(), polar(), radial(), azimuthal()]
}

/// A point of the sampling range at least `gap` from every pole and from
/// the range ends, drawn from the unit parameter `t`.
pub fn point_away_from_poles(p: &MomentumFunction, t: f64, gap: f64) -> Option<f64> {
    let (lo, hi) = p.sampling_range();
    let x = lo + gap + (hi - lo - 2.0 * gap) * t;
    let mut avoid: Vec<f64> = p.pole_locations().iter().map(|z| z.re).collect();
    avoid.extend(p.wave_function().boundary_zeros());
    avoid.iter().all(|a| (x - a).abs() >= gap).then_some(x)
}
