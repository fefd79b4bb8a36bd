//! Lorentz force on a polarized particle and its three-term split.
//!
//! All proportionality constants are 1 in the canonical convention; forces
//! and impulses here are in those normalized units.

use serde::Serialize;

use super::series::FieldTimeSeries;
use super::DynamicsError;
use crate::material::{chi_effective, Particle};
use crate::quantities::Quantity;

/// Central differences inside, first-order one-sided at both ends.
pub fn time_derivative(values: &[f64], dt: f64) -> Vec<f64> {
    let n = values.len();
    let mut d = vec![0.0; n];
    if n < 2 {
        return d;
    }
    d[0] = (values[1] - values[0]) / dt;
    d[n - 1] = (values[n - 1] - values[n - 2]) / dt;
    for i in 1..n - 1 {
        d[i] = (values[i + 1] - values[i - 1]) / (2.0 * dt);
    }
    d
}

/// Trapezoidal ∫ f dt on uniform samples.
pub fn integrate(values: &[f64], dt: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => dt * (0.5 * (values[0] + values[n - 1]) + values[1..n - 1].iter().sum::<f64>()),
    }
}

/// χ_xy at every sample: from the series when it carries χ parameters,
/// otherwise from the particle's lab-frame tensor.
pub fn chi_samples(p: &Particle, s: &FieldTimeSeries) -> Vec<f64> {
    match s.chi_params() {
        Some(c) => c
            .iter()
            .zip(s.e_x().iter().zip(s.b_y()))
            .map(|(c, (&e, &b))| c.chi_effective(e, b))
            .collect(),
        None => {
            let t = p.oriented_tensor();
            s.e_x()
                .iter()
                .zip(s.b_y())
                .map(|(&e, &b)| chi_effective(&t, e, b))
                .collect()
        }
    }
}

/// F = B_y · dP_x/dt.
pub fn force_direct(p: &Particle, s: &FieldTimeSeries) -> Result<Vec<f64>, DynamicsError> {
    if s.len() < 3 {
        return Err(DynamicsError::TooFewSamples(s.len()));
    }
    let chi = chi_samples(p, s);
    let polarization: Vec<f64> = s
        .e_x()
        .iter()
        .zip(s.b_y())
        .zip(&chi)
        .map(|((&e, &b), &c)| p.epsilon() * e + c * b)
        .collect();
    let dp = time_derivative(&polarization, s.dt());
    Ok(s.b_y().iter().zip(dp).map(|(b, d)| b * d).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ForceTerm {
    /// B_y · d(εE_x)/dt
    Dielectric,
    /// χ_xy · ½ d(B_y²)/dt
    ClassicalMagnetoElectric,
    /// B_y² · dχ_xy/dt
    ChiDot,
}

impl ForceTerm {
    /// The dielectric term is purely classical; the other two also receive
    /// contributions from ⟨B²⟩ of the vacuum.
    pub fn carries_vacuum_contribution(self) -> bool {
        !matches!(self, ForceTerm::Dielectric)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForceDecomposition {
    pub dielectric: Vec<f64>,
    pub classical_me: Vec<f64>,
    pub chi_dot: Vec<f64>,
}

impl ForceDecomposition {
    pub fn term(&self, which: ForceTerm) -> &[f64] {
        match which {
            ForceTerm::Dielectric => &self.dielectric,
            ForceTerm::ClassicalMagnetoElectric => &self.classical_me,
            ForceTerm::ChiDot => &self.chi_dot,
        }
    }

    pub fn total(&self) -> Vec<f64> {
        (0..self.dielectric.len())
            .map(|i| self.dielectric[i] + self.classical_me[i] + self.chi_dot[i])
            .collect()
    }

    /// Sum of the terms that can carry vacuum momentum.
    pub fn vacuum_capable(&self) -> Vec<f64> {
        self.classical_me
            .iter()
            .zip(&self.chi_dot)
            .map(|(a, b)| a + b)
            .collect()
    }
}

pub fn force_decomposed(p: &Particle, s: &FieldTimeSeries) -> Result<ForceDecomposition, DynamicsError> {
    if s.len() < 3 {
        return Err(DynamicsError::TooFewSamples(s.len()));
    }
    let dt = s.dt();
    let chi = chi_samples(p, s);
    let eps_e: Vec<f64> = s.e_x().iter().map(|e| p.epsilon() * e).collect();
    let b2: Vec<f64> = s.b_y().iter().map(|b| b * b).collect();
    let d_eps_e = time_derivative(&eps_e, dt);
    let d_b2 = time_derivative(&b2, dt);
    let d_chi = time_derivative(&chi, dt);
    let n = s.len();
    let b = s.b_y();
    Ok(ForceDecomposition {
        dielectric: (0..n).map(|i| b[i] * d_eps_e[i]).collect(),
        classical_me: (0..n).map(|i| chi[i] * 0.5 * d_b2[i]).collect(),
        chi_dot: (0..n).map(|i| b2[i] * d_chi[i]).collect(),
    })
}

/// Impulse χ·½·(d⟨B²⟩/dt)·duration at constant rate.
pub fn channel_cavity(chi_xy: f64, db2_dt: f64, duration: f64) -> Result<f64, DynamicsError> {
    if !duration.is_finite() || duration <= 0.0 {
        return Err(DynamicsError::NonPositiveDuration(duration));
    }
    Ok(chi_xy * 0.5 * db2_dt * duration)
}

/// Impulse ⟨B²⟩·(χ_end − χ_start); carries the dimension of `b2`.
pub fn channel_chi_dot(b2: Quantity, chi_start: f64, chi_end: f64) -> Quantity {
    b2 * (chi_end - chi_start)
}
