//! Satellite attitude-correction planning.
//!
//! An attitude rate at a lever arm becomes a tangential speed; one π-rotation
//! of every active particle (one "cycle") delivers
//! `Δv_rot · m_active / M` of it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{delta_v_rotation, payload_delta_v, DynamicsError};
use crate::material::{MaterialError, Particle};
use crate::quantities::Quantity;
use crate::vacuum::{CutoffConvention, VacuumModel};

pub mod solve;
pub mod sweep;

pub use solve::{solve_for_unknown, solve_for_unknown_in, Solution, Unknown};
pub use sweep::{sweep, sweep_rows, SweepGrid, SweepMode, SweepOptions, SweepRow, DEFAULT_SWEEP_CAP};

const SECONDS_PER_DAY: f64 = 86_400.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MissionError {
    #[error("invalid mission spec: {}", .0.join("; "))]
    InvalidSpec(Vec<String>),
    #[error("infeasible for any value in [{lo:e}, {hi:e}] of {unknown}")]
    Infeasible { unknown: Unknown, lo: f64, hi: f64 },
    #[error("sweep has {count} grid points, above the cap of {cap}")]
    SweepTooLarge { count: u128, cap: u64 },
    #[error("sweep grid axis `{0}` is empty")]
    EmptyAxis(&'static str),
    #[error("sweep row {index}: {message}")]
    SweepRow { index: usize, message: String },
    #[error("output failed: {0}")]
    Output(String),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Material(#[from] MaterialError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MissionSpec {
    /// Attitude rate, deg/day.
    pub target_rate: f64,
    /// Lever arm, m.
    pub wheel_radius: f64,
    /// kg.
    pub satellite_mass: f64,
    pub active_mass_fraction: f64,
    /// m.
    pub particle_size: f64,
    /// kg/m³.
    pub particle_density: f64,
    pub chi0: f64,
    #[serde(rename = "prefactor_A")]
    pub prefactor_a: f64,
}

impl MissionSpec {
    /// χ⁰ = 10⁻³, 1 nm particles at 1 g/cm³, half the satellite active,
    /// A = 10⁻², 4.95 deg/day at 1 m.
    pub fn design_point() -> Self {
        Self {
            target_rate: 4.95,
            wheel_radius: 1.0,
            satellite_mass: 100.0,
            active_mass_fraction: 0.5,
            particle_size: 1e-9,
            particle_density: 1000.0,
            chi0: 1e-3,
            prefactor_a: 1e-2,
        }
    }

    pub fn validate(&self) -> Result<(), MissionError> {
        let mut bad = Vec::new();
        let mut positive = |name: &str, v: f64| {
            if !(v.is_finite() && v > 0.0) {
                bad.push(format!("{name} must be finite and > 0 (got {v})"));
            }
        };
        positive("target_rate", self.target_rate);
        positive("wheel_radius", self.wheel_radius);
        positive("satellite_mass", self.satellite_mass);
        positive("active_mass_fraction", self.active_mass_fraction);
        positive("particle_size", self.particle_size);
        positive("particle_density", self.particle_density);
        positive("chi0", self.chi0);
        positive("prefactor_A", self.prefactor_a);
        if self.active_mass_fraction > 1.0 {
            bad.push(format!(
                "active_mass_fraction must be <= 1 (got {})",
                self.active_mass_fraction
            ));
        }
        if self.chi0 > 1.0 {
            bad.push(format!("chi0 must be <= 1 (got {})", self.chi0));
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(MissionError::InvalidSpec(bad))
        }
    }

    pub fn vacuum_model(&self) -> VacuumModel {
        // The cutoff does not enter the rotation Δv.
        VacuumModel {
            prefactor_a: self.prefactor_a,
            cutoff: CutoffConvention::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MissionReport {
    /// m/s.
    pub required_tangential_v: f64,
    /// m/s.
    pub achieved_tangential_v: f64,
    pub feasible: bool,
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solved_unknown: Option<(String, f64)>,
}

/// v = rate·(π/180)/86400·radius.
pub fn rate_to_tangential_v(rate_deg_day: f64, radius_m: f64) -> Quantity {
    Quantity::velocity(rate_deg_day.to_radians() / SECONDS_PER_DAY * radius_m)
}

pub fn tangential_v_to_rate(v_m_s: f64, radius_m: f64) -> f64 {
    (v_m_s / radius_m * SECONDS_PER_DAY).to_degrees()
}

/// Payload tangential speed from one cycle.
pub fn achieved_tangential_v(spec: &MissionSpec) -> Result<Quantity, MissionError> {
    let particle = Particle::simple(spec.chi0, spec.particle_size, spec.particle_density)?;
    let dv = delta_v_rotation(&particle, &spec.vacuum_model())?;
    let m_total = Quantity::mass(spec.satellite_mass);
    Ok(payload_delta_v(dv, m_total * spec.active_mass_fraction, m_total)?)
}

pub fn evaluate_mission(spec: &MissionSpec) -> Result<MissionReport, MissionError> {
    spec.validate()?;
    let required = rate_to_tangential_v(spec.target_rate, spec.wheel_radius).value;
    let achieved = achieved_tangential_v(spec)?.value;
    Ok(MissionReport {
        required_tangential_v: required,
        achieved_tangential_v: achieved,
        feasible: achieved >= required,
        margin: achieved / required,
        solved_unknown: None,
    })
}
