//! Per-maneuver velocity gains.

use serde::{Deserialize, Serialize};

use super::series::FieldTimeSeries;
use super::DynamicsError;
use crate::material::Particle;
use crate::quantities::{Constants, Dimension, Quantity};
use crate::vacuum::VacuumModel;

/// Normalization tolerance for axes and directions.
pub const UNIT_VECTOR_TOL: f64 = 1e-12;

/// Δv of one π-rotation: A·ħ·2χ⁰_xy/(ρa⁴), using the lab-frame χ⁰_xy.
pub fn delta_v_rotation(p: &Particle, model: &VacuumModel) -> Result<Quantity, DynamicsError> {
    model.validate()?;
    let k = Constants::CODATA;
    let a = Quantity::length(p.size_a());
    let rho = Quantity::mass_density(p.density_rho());
    let numerator = Quantity::dimensionless(model.prefactor_a * 2.0 * p.oriented_chi_xy()) * k.hbar;
    let by_density = numerator / (rho * a.powi(4));
    let by_mass = numerator / (rho * a.powi(3) * a);
    debug_assert!(
        (by_density.value - by_mass.value).abs() <= 1e-12 * by_density.value.abs(),
        "{by_density} vs {by_mass}"
    );
    debug_assert_eq!(by_density.dim, Dimension::VELOCITY);
    Ok(by_density)
}

/// Δv = A·ħ·2χ/(m·a) with the particle mass fixed independently of `a`.
pub fn delta_v_rotation_fixed_mass(
    chi_xy: f64,
    a: f64,
    mass: f64,
    model: &VacuumModel,
) -> Result<Quantity, DynamicsError> {
    model.validate()?;
    if !a.is_finite() || a <= 0.0 {
        return Err(DynamicsError::NonPositive { what: "size", value: a });
    }
    if !mass.is_finite() || mass <= 0.0 {
        return Err(DynamicsError::NonPositive {
            what: "mass",
            value: mass,
        });
    }
    let k = Constants::CODATA;
    Ok(Quantity::dimensionless(model.prefactor_a * 2.0 * chi_xy) * k.hbar
        / (Quantity::mass(mass) * Quantity::length(a)))
}

/// Δv of merging `n` particles of size `a` into one body of size L = n^(1/3)·a:
/// A·(ħ/ρ)·χ·(1/a⁴ − 1/L⁴).
pub fn delta_v_aggregation(a: f64, rho: f64, chi: f64, n: u64, model: &VacuumModel) -> Result<Quantity, DynamicsError> {
    model.validate()?;
    if n == 0 {
        return Err(DynamicsError::InvalidCount(n));
    }
    if !a.is_finite() || a <= 0.0 {
        return Err(DynamicsError::NonPositive { what: "size", value: a });
    }
    if !rho.is_finite() || rho <= 0.0 {
        return Err(DynamicsError::NonPositive {
            what: "density",
            value: rho,
        });
    }
    let k = Constants::CODATA;
    // 1/a⁴ − 1/L⁴ = (1 − n^(-4/3))/a⁴, which is exactly 0 at n = 1.
    let shrink = 1.0 - (n as f64).powf(-4.0 / 3.0);
    let inv_a4 = Quantity::length(a).powi(-4);
    Ok(Quantity::dimensionless(model.prefactor_a * chi * shrink) * k.hbar / Quantity::mass_density(rho) * inv_a4)
}

/// ΔV = Δv·m_active/M_total.
pub fn payload_delta_v(dv: Quantity, m_active: Quantity, m_total: Quantity) -> Result<Quantity, DynamicsError> {
    dv.value_as(Dimension::VELOCITY)?;
    let m = m_active.value_as(Dimension::MASS)?;
    let total = m_total.value_as(Dimension::MASS)?;
    if !m.is_finite() || m <= 0.0 {
        return Err(DynamicsError::NonPositive {
            what: "active mass",
            value: m,
        });
    }
    if !total.is_finite() || total <= 0.0 {
        return Err(DynamicsError::NonPositive {
            what: "total mass",
            value: total,
        });
    }
    if m > total {
        return Err(DynamicsError::ActiveMassExceedsTotal { active: m, total });
    }
    Ok(dv * (m_active / m_total))
}

/// One actuation step applied to the whole particle array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Maneuver {
    Rotation { axis: [f64; 3], angle: f64 },
    Aggregation { n: u64, a_m: f64, direction: [f64; 3] },
    FieldModulation { series: FieldTimeSeries },
    CavityModulation { db2_dt: f64, duration_s: f64 },
}

fn check_unit(v: &[f64; 3], what: &'static str) -> Result<(), DynamicsError> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > UNIT_VECTOR_TOL {
        return Err(DynamicsError::NotUnitVector { what, norm });
    }
    Ok(())
}

impl Maneuver {
    pub fn kind(&self) -> &'static str {
        match self {
            Maneuver::Rotation { .. } => "rotation",
            Maneuver::Aggregation { .. } => "aggregation",
            Maneuver::FieldModulation { .. } => "field_modulation",
            Maneuver::CavityModulation { .. } => "cavity_modulation",
        }
    }

    /// π-rotation about x.
    pub fn flip_x() -> Self {
        Maneuver::Rotation {
            axis: [1.0, 0.0, 0.0],
            angle: std::f64::consts::PI,
        }
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        match self {
            Maneuver::Rotation { axis, angle } => {
                check_unit(axis, "rotation axis")?;
                if !angle.is_finite() {
                    return Err(DynamicsError::NonFiniteSample);
                }
            }
            Maneuver::Aggregation { n, a_m, direction } => {
                if *n == 0 {
                    return Err(DynamicsError::InvalidCount(*n));
                }
                if !a_m.is_finite() || *a_m <= 0.0 {
                    return Err(DynamicsError::NonPositive {
                        what: "size",
                        value: *a_m,
                    });
                }
                check_unit(direction, "aggregation direction")?;
            }
            Maneuver::FieldModulation { series } => {
                if series.len() < 3 {
                    return Err(DynamicsError::TooFewSamples(series.len()));
                }
            }
            Maneuver::CavityModulation { db2_dt, duration_s } => {
                if !db2_dt.is_finite() {
                    return Err(DynamicsError::NonFiniteSample);
                }
                if !duration_s.is_finite() || *duration_s <= 0.0 {
                    return Err(DynamicsError::NonPositiveDuration(*duration_s));
                }
            }
        }
        Ok(())
    }
}
