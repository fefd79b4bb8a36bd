//! Unit-carrying scalars.
//!
//! A [`Quantity`] is an `f64` tagged with a dimension vector over
//! (length, mass, time, current) and the unit system its value is scaled in.
//! Mechanical quantities are SI throughout the crate; Gaussian values (CGS for
//! mechanical dimensions) only come out of [`convert_gaussian_si`]. Gaussian field strengths have half-integer
//! exponents (statV/cm = g^½ cm^-½ s^-1), so exponents are stored in halves.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

/// Reduced Planck constant, J·s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Speed of light in vacuum, m/s (exact).
pub const C: f64 = 2.997_924_58e8;

/// 1 statV/cm expressed in V/m.
const STATVOLT_PER_CM_IN_V_PER_M: f64 = 2.997_924_58e4;
/// 1 T expressed in gauss.
const GAUSS_PER_TESLA: f64 = 1.0e4;
/// 1 J/m³ expressed in erg/cm³.
const ERG_CM3_PER_J_M3: f64 = 10.0;
const CM_PER_M: f64 = 100.0;
const G_PER_KG: f64 = 1000.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DimensionError {
    #[error("dimension mismatch in {op}: {lhs} vs {rhs}")]
    Mismatch {
        op: &'static str,
        lhs: Dimension,
        rhs: Dimension,
    },
    #[error("unit system mismatch in {op}: {lhs:?} vs {rhs:?}")]
    SystemMismatch {
        op: &'static str,
        lhs: UnitSystem,
        rhs: UnitSystem,
    },
    #[error("unsupported dimension {dim} for {system:?} to Gaussian/SI conversion")]
    UnsupportedConversion { dim: Dimension, system: UnitSystem },
}

/// Exponents over (length, mass, time, current), stored as twice the
/// exponent so half-integer Gaussian dimensions are representable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Dimension {
    halves: [i8; 4],
}

impl Dimension {
    pub const DIMENSIONLESS: Dimension = Dimension::new(0, 0, 0, 0);
    pub const LENGTH: Dimension = Dimension::new(1, 0, 0, 0);
    pub const MASS: Dimension = Dimension::new(0, 1, 0, 0);
    pub const TIME: Dimension = Dimension::new(0, 0, 1, 0);
    pub const VELOCITY: Dimension = Dimension::new(1, 0, -1, 0);
    pub const MOMENTUM: Dimension = Dimension::new(1, 1, -1, 0);
    pub const FORCE: Dimension = Dimension::new(1, 1, -2, 0);
    pub const ENERGY: Dimension = Dimension::new(2, 1, -2, 0);
    pub const ACTION: Dimension = Dimension::new(2, 1, -1, 0);
    pub const MASS_DENSITY: Dimension = Dimension::new(-3, 1, 0, 0);
    pub const ENERGY_DENSITY: Dimension = Dimension::new(-1, 1, -2, 0);
    pub const WAVENUMBER: Dimension = Dimension::new(-1, 0, 0, 0);
    /// SI electric field, V/m = kg·m·s⁻³·A⁻¹.
    pub const E_FIELD_SI: Dimension = Dimension::new(1, 1, -3, -1);
    /// SI magnetic flux density, T = kg·s⁻²·A⁻¹.
    pub const B_FIELD_SI: Dimension = Dimension::new(0, 1, -2, -1);
    /// Gaussian field strength (statV/cm and gauss share it).
    pub const FIELD_GAUSSIAN: Dimension = Dimension::from_halves([-1, 1, -2, 0]);

    pub const fn new(length: i8, mass: i8, time: i8, current: i8) -> Self {
        Self {
            halves: [2 * length, 2 * mass, 2 * time, 2 * current],
        }
    }

    pub const fn from_halves(halves: [i8; 4]) -> Self {
        Self { halves }
    }

    /// Exponents as floats, in (length, mass, time, current) order.
    pub fn exponents(&self) -> [f64; 4] {
        self.halves.map(|h| f64::from(h) / 2.0)
    }

    pub fn is_dimensionless(&self) -> bool {
        self.halves == [0; 4]
    }

    pub fn times(self, rhs: Dimension) -> Dimension {
        let mut halves = self.halves;
        for (h, r) in halves.iter_mut().zip(rhs.halves) {
            *h += r;
        }
        Dimension { halves }
    }

    pub fn per(self, rhs: Dimension) -> Dimension {
        self.times(rhs.powi(-1))
    }

    pub fn powi(self, n: i32) -> Dimension {
        Dimension {
            halves: self.halves.map(|h| (i32::from(h) * n) as i8),
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .halves
            .iter()
            .map(|&h| {
                if h % 2 == 0 {
                    format!("{}", h / 2)
                } else {
                    format!("{h}/2")
                }
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum UnitSystem {
    #[default]
    Si,
    Gaussian,
}

/// Gaussian statV/cm and gauss share one dimension, so converting back to SI
/// names the SI quantity expected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConversionDirection {
    SiToGaussian,
    GaussianToSi(SiTarget),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiTarget {
    EField,
    BField,
    EnergyDensity,
    /// Any current-free dimension with integer exponents; CGS ↔ SI.
    Mechanical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub dim: Dimension,
    pub system: UnitSystem,
}

impl Quantity {
    pub const fn new(value: f64, dim: Dimension) -> Self {
        Self {
            value,
            dim,
            system: UnitSystem::Si,
        }
    }

    pub const fn gaussian(value: f64, dim: Dimension) -> Self {
        Self {
            value,
            dim,
            system: UnitSystem::Gaussian,
        }
    }

    pub const fn dimensionless(value: f64) -> Self {
        Self::new(value, Dimension::DIMENSIONLESS)
    }

    pub const fn length(m: f64) -> Self {
        Self::new(m, Dimension::LENGTH)
    }

    pub const fn mass(kg: f64) -> Self {
        Self::new(kg, Dimension::MASS)
    }

    pub const fn time(s: f64) -> Self {
        Self::new(s, Dimension::TIME)
    }

    pub const fn velocity(m_s: f64) -> Self {
        Self::new(m_s, Dimension::VELOCITY)
    }

    pub const fn momentum(kg_m_s: f64) -> Self {
        Self::new(kg_m_s, Dimension::MOMENTUM)
    }

    pub const fn mass_density(kg_m3: f64) -> Self {
        Self::new(kg_m3, Dimension::MASS_DENSITY)
    }

    pub const fn energy_density(j_m3: f64) -> Self {
        Self::new(j_m3, Dimension::ENERGY_DENSITY)
    }

    pub const fn e_field(v_m: f64) -> Self {
        Self::new(v_m, Dimension::E_FIELD_SI)
    }

    pub const fn b_field(tesla: f64) -> Self {
        Self::new(tesla, Dimension::B_FIELD_SI)
    }

    pub fn dimension(&self) -> Dimension {
        self.dim
    }

    fn compatible_system(&self, rhs: &Quantity, op: &'static str) -> Result<UnitSystem, DimensionError> {
        match (self.dim.is_dimensionless(), rhs.dim.is_dimensionless()) {
            (true, true) => Ok(UnitSystem::Si),
            (true, false) => Ok(rhs.system),
            (false, true) => Ok(self.system),
            (false, false) if self.system == rhs.system => Ok(self.system),
            _ => Err(DimensionError::SystemMismatch {
                op,
                lhs: self.system,
                rhs: rhs.system,
            }),
        }
    }

    pub fn try_add(self, rhs: Quantity) -> Result<Quantity, DimensionError> {
        if self.dim != rhs.dim {
            return Err(DimensionError::Mismatch {
                op: "add",
                lhs: self.dim,
                rhs: rhs.dim,
            });
        }
        let system = self.compatible_system(&rhs, "add")?;
        Ok(Quantity {
            value: self.value + rhs.value,
            dim: self.dim,
            system,
        })
    }

    pub fn try_sub(self, rhs: Quantity) -> Result<Quantity, DimensionError> {
        self.try_add(-rhs).map_err(|e| match e {
            DimensionError::Mismatch { lhs, rhs, .. } => DimensionError::Mismatch { op: "sub", lhs, rhs },
            other => other,
        })
    }

    pub fn try_mul(self, rhs: Quantity) -> Result<Quantity, DimensionError> {
        let system = self.compatible_system(&rhs, "mul")?;
        Ok(Quantity {
            value: self.value * rhs.value,
            dim: self.dim.times(rhs.dim),
            system,
        })
    }

    pub fn try_div(self, rhs: Quantity) -> Result<Quantity, DimensionError> {
        let system = self.compatible_system(&rhs, "div")?;
        Ok(Quantity {
            value: self.value / rhs.value,
            dim: self.dim.per(rhs.dim),
            system,
        })
    }

    pub fn powi(self, n: i32) -> Quantity {
        Quantity {
            value: self.value.powi(n),
            dim: self.dim.powi(n),
            system: self.system,
        }
    }

    pub fn scale(self, factor: f64) -> Quantity {
        Quantity {
            value: self.value * factor,
            ..self
        }
    }

    /// Returns the value if the quantity carries `dim`.
    pub fn value_as(&self, dim: Dimension) -> Result<f64, DimensionError> {
        if self.dim == dim {
            Ok(self.value)
        } else {
            Err(DimensionError::Mismatch {
                op: "value_as",
                lhs: self.dim,
                rhs: dim,
            })
        }
    }
}

impl Neg for Quantity {
    type Output = Quantity;
    fn neg(self) -> Quantity {
        Quantity {
            value: -self.value,
            ..self
        }
    }
}

/// Panics on mismatched dimensions; use [`Quantity::try_add`] to recover.
impl Add for Quantity {
    type Output = Quantity;
    fn add(self, rhs: Quantity) -> Quantity {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

/// Panics on mismatched dimensions; use [`Quantity::try_sub`] to recover.
impl Sub for Quantity {
    type Output = Quantity;
    fn sub(self, rhs: Quantity) -> Quantity {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

/// Panics when combining dimensioned quantities from different unit systems.
impl Mul for Quantity {
    type Output = Quantity;
    fn mul(self, rhs: Quantity) -> Quantity {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Div for Quantity {
    type Output = Quantity;
    fn div(self, rhs: Quantity) -> Quantity {
        self.try_div(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul<f64> for Quantity {
    type Output = Quantity;
    fn mul(self, rhs: f64) -> Quantity {
        self.scale(rhs)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} [{:?}]", self.value, self.dim, self.system)
    }
}

/// Physical constants as dimension-tagged quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub hbar: Quantity,
    pub c: Quantity,
}

impl Constants {
    pub const CODATA: Constants = Constants {
        hbar: Quantity::new(HBAR, Dimension::ACTION),
        c: Quantity::velocity(C),
    };
}

impl Default for Constants {
    fn default() -> Self {
        Self::CODATA
    }
}

/// Returns the composed dimension vector of an expression.
pub fn dimension_check(expr: &Quantity) -> Dimension {
    expr.dim
}

/// SI → CGS scale for a current-free dimension with integer exponents.
fn cgs_factor(d: Dimension) -> Option<f64> {
    let [l, m, _, i] = d.halves;
    if i != 0 || d.halves.iter().any(|h| h % 2 != 0) {
        return None;
    }
    Some(CM_PER_M.powi(i32::from(l / 2)) * G_PER_KG.powi(i32::from(m / 2)))
}

/// Rescales an E-field, B-field or any mechanical quantity between SI and
/// Gaussian (CGS).
pub fn convert_gaussian_si(q: Quantity, direction: ConversionDirection) -> Result<Quantity, DimensionError> {
    let unsupported = || DimensionError::UnsupportedConversion {
        dim: q.dim,
        system: q.system,
    };
    match direction {
        ConversionDirection::SiToGaussian => {
            if q.system != UnitSystem::Si {
                return Err(unsupported());
            }
            let (factor, dim) = match q.dim {
                d if d == Dimension::E_FIELD_SI => (1.0 / STATVOLT_PER_CM_IN_V_PER_M, Dimension::FIELD_GAUSSIAN),
                d if d == Dimension::B_FIELD_SI => (GAUSS_PER_TESLA, Dimension::FIELD_GAUSSIAN),
                d if d == Dimension::ENERGY_DENSITY => (ERG_CM3_PER_J_M3, Dimension::ENERGY_DENSITY),
                d => (cgs_factor(d).ok_or_else(unsupported)?, d),
            };
            Ok(Quantity::gaussian(q.value * factor, dim))
        }
        ConversionDirection::GaussianToSi(target) => {
            if q.system != UnitSystem::Gaussian {
                return Err(unsupported());
            }
            if target == SiTarget::Mechanical {
                let factor = cgs_factor(q.dim).ok_or_else(unsupported)?;
                return Ok(Quantity::new(q.value / factor, q.dim));
            }
            let (gaussian_dim, factor, dim) = match target {
                SiTarget::EField => (
                    Dimension::FIELD_GAUSSIAN,
                    STATVOLT_PER_CM_IN_V_PER_M,
                    Dimension::E_FIELD_SI,
                ),
                SiTarget::BField => (Dimension::FIELD_GAUSSIAN, 1.0 / GAUSS_PER_TESLA, Dimension::B_FIELD_SI),
                SiTarget::EnergyDensity => (
                    Dimension::ENERGY_DENSITY,
                    1.0 / ERG_CM3_PER_J_M3,
                    Dimension::ENERGY_DENSITY,
                ),
                SiTarget::Mechanical => unreachable!("handled above"),
            };
            if q.dim != gaussian_dim {
                return Err(unsupported());
            }
            Ok(Quantity::new(q.value * factor, dim))
        }
    }
}
