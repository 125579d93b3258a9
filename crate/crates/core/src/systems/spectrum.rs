use serde::Serialize;

use crate::error::{QhjError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HOQuantumNumbers {
    pub n: [u32; 3],
    pub omega: [f64; 3],
    pub hbar: f64,
}

impl HOQuantumNumbers {
    pub fn new(n: [u32; 3]) -> Self {
        HOQuantumNumbers {
            n,
            omega: [1.0; 3],
            hbar: 1.0,
        }
    }

    pub fn with_omega(mut self, omega: [f64; 3]) -> Result<Self> {
        if omega.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(QhjError::InvalidQuantumNumbers(format!(
                "oscillator frequencies must be positive, got {omega:?}"
            )));
        }
        self.omega = omega;
        Ok(self)
    }

    pub fn with_hbar(mut self, hbar: f64) -> Result<Self> {
        check_positive("hbar", hbar)?;
        self.hbar = hbar;
        Ok(self)
    }

    /// Quantised separation constants `kappa_s / (hbar^2 lambda_s) = 2 n_s + 1`.
    pub fn kappa_bar(&self) -> [f64; 3] {
        self.n.map(|n| 2.0 * f64::from(n) + 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HydrogenQuantumNumbers {
    pub n: u32,
    pub ell: u32,
    pub m: i32,
    pub mass: f64,
    pub k: f64,
    pub hbar: f64,
}

impl HydrogenQuantumNumbers {
    pub fn new(n: u32, ell: u32, m: i32) -> Result<Self> {
        if n < 1 {
            return Err(QhjError::InvalidQuantumNumbers(format!(
                "n >= 1 is required, got n = {n}"
            )));
        }
        if ell >= n {
            return Err(QhjError::InvalidQuantumNumbers(format!(
                "0 <= ell <= n - 1 is required, got n = {n}, ell = {ell}"
            )));
        }
        if m.unsigned_abs() > ell {
            return Err(QhjError::InvalidQuantumNumbers(format!(
                "|m| <= ell is required, got ell = {ell}, m = {m}"
            )));
        }
        Ok(HydrogenQuantumNumbers {
            n,
            ell,
            m,
            mass: 1.0,
            k: 1.0,
            hbar: 1.0,
        })
    }

    pub fn with_constants(mut self, mass: f64, k: f64, hbar: f64) -> Result<Self> {
        check_positive("mass", mass)?;
        check_positive("k", k)?;
        check_positive("hbar", hbar)?;
        self.mass = mass;
        self.k = k;
        self.hbar = hbar;
        Ok(self)
    }

    pub fn kappa_theta_bar(&self) -> f64 {
        let l = f64::from(self.ell);
        l * (l + 1.0)
    }

    pub fn kappa_phi_bar(&self) -> f64 {
        f64::from(self.m).powi(2)
    }

    /// Radial eigenvalue `lambda = n`.
    pub fn lambda(&self) -> f64 {
        f64::from(self.n)
    }
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(QhjError::InvalidQuantumNumbers(format!(
            "{name} must be positive, got {value}"
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: f64,
}

impl NamedValue {
    fn new(name: &str, value: f64) -> Self {
        NamedValue {
            name: name.to_owned(),
            value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub energy: f64,
    /// Action variables in units of `hbar`.
    pub action_values: Vec<NamedValue>,
    pub angle_values: Vec<NamedValue>,
}

impl Spectrum {
    pub fn action(&self, name: &str) -> Option<f64> {
        self.action_values
            .iter()
            .find(|v| v.name == name)
            .map(|v| v.value)
    }

    pub fn angle(&self, name: &str) -> Option<f64> {
        self.angle_values
            .iter()
            .find(|v| v.name == name)
            .map(|v| v.value)
    }
}

/// `E = sum_s omega_s (J_s + hbar/2)`.
pub fn ho_energy(actions: [f64; 3], omega: [f64; 3], hbar: f64) -> f64 {
    actions
        .iter()
        .zip(omega)
        .map(|(j, w)| w * (j + hbar / 2.0))
        .sum()
}

/// `w_s = dE/dJ_s = omega_s`.
pub fn ho_angle(omega: [f64; 3]) -> [f64; 3] {
    omega
}

/// `E = -m k^2 / (2 (J_r + hbar)^2)`.
pub fn hydrogen_energy(j_r: f64, mass: f64, k: f64, hbar: f64) -> f64 {
    -mass * k * k / (2.0 * (j_r + hbar).powi(2))
}

/// `w_r = dE/dJ_r = m k^2 / (J_r + hbar)^3`.
pub fn hydrogen_angle(j_r: f64, mass: f64, k: f64, hbar: f64) -> f64 {
    mass * k * k / (j_r + hbar).powi(3)
}

const AXES: [&str; 3] = ["x", "y", "z"];

pub fn ho_spectrum(q: &HOQuantumNumbers) -> Spectrum {
    let actions = q.n.map(|n| f64::from(n) * q.hbar);
    let angles = ho_angle(q.omega);
    Spectrum {
        energy: ho_energy(actions, q.omega, q.hbar),
        action_values: AXES
            .iter()
            .zip(q.n)
            .map(|(axis, n)| NamedValue::new(&format!("J_{axis}"), f64::from(n)))
            .collect(),
        angle_values: AXES
            .iter()
            .zip(angles)
            .map(|(axis, w)| NamedValue::new(&format!("w_{axis}"), w))
            .collect(),
    }
}

pub fn hydrogen_spectrum(q: &HydrogenQuantumNumbers) -> Spectrum {
    let j_r = f64::from(q.n - 1) * q.hbar;
    Spectrum {
        energy: hydrogen_energy(j_r, q.mass, q.k, q.hbar),
        action_values: vec![
            NamedValue::new("J_phi", f64::from(q.m)),
            NamedValue::new("J_theta", f64::from(q.ell)),
            NamedValue::new("J_r", f64::from(q.n - 1)),
        ],
        angle_values: vec![NamedValue::new(
            "w_r",
            hydrogen_angle(j_r, q.mass, q.k, q.hbar),
        )],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "system", rename_all = "snake_case")]
pub enum SystemQuantumNumbers {
    Oscillator(HOQuantumNumbers),
    Hydrogen(HydrogenQuantumNumbers),
}

/// `|dE/dJ (central difference) - w|`, maximised over the coordinates that
/// carry an angle variable.
pub fn angle_variable_fd_check(system: &SystemQuantumNumbers, delta: f64) -> Result<f64> {
    let hbar = match system {
        SystemQuantumNumbers::Oscillator(q) => q.hbar,
        SystemQuantumNumbers::Hydrogen(q) => q.hbar,
    };
    if !(delta > 0.0 && delta <= hbar / 10.0) {
        return Err(QhjError::InvalidConfig(format!(
            "finite-difference step must lie in (0, hbar/10], got {delta}"
        )));
    }
    match system {
        SystemQuantumNumbers::Oscillator(q) => {
            let base = q.n.map(|n| f64::from(n) * q.hbar);
            let analytic = ho_angle(q.omega);
            let worst = (0..3)
                .map(|s| {
                    let mut plus = base;
                    let mut minus = base;
                    plus[s] += delta;
                    minus[s] -= delta;
                    let fd = (ho_energy(plus, q.omega, q.hbar) - ho_energy(minus, q.omega, q.hbar))
                        / (2.0 * delta);
                    (fd - analytic[s]).abs()
                })
                .fold(0.0, f64::max);
            Ok(worst)
        }
        SystemQuantumNumbers::Hydrogen(q) => {
            let j_r = f64::from(q.n - 1) * q.hbar;
            let e = |j| hydrogen_energy(j, q.mass, q.k, q.hbar);
            let fd = (e(j_r + delta) - e(j_r - delta)) / (2.0 * delta);
            Ok((fd - hydrogen_angle(j_r, q.mass, q.k, q.hbar)).abs())
        }
    }
}
