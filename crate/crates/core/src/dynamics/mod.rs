//! Forces, momentum-transfer channels, maneuvers and the impulse ledger.

use thiserror::Error;

use crate::material::MaterialError;
use crate::quantities::DimensionError;
use crate::vacuum::VacuumError;

pub mod forces;
pub mod ledger;
pub mod maneuver;
pub mod series;

pub use forces::{
    channel_cavity, channel_chi_dot, force_decomposed, force_direct, integrate, time_derivative, ForceDecomposition,
    ForceTerm,
};
pub use ledger::{run_maneuver_sequence, ImpulseLedger, LedgerEntry, ManeuverSequence, SequenceError};
pub use maneuver::{delta_v_aggregation, delta_v_rotation, delta_v_rotation_fixed_mass, payload_delta_v, Maneuver};
pub use series::{ChiParams, FieldTimeSeries};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("time series needs at least 3 samples, got {0}")]
    TooFewSamples(usize),
    #[error("time series columns differ in length")]
    SeriesLength,
    #[error("time samples are not uniformly spaced (at sample {index})")]
    NonUniformSpacing { index: usize },
    #[error("non-finite sample")]
    NonFiniteSample,
    #[error("csv line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error("duration must be > 0, got {0} s")]
    NonPositiveDuration(f64),
    #[error("{what} must be > 0, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("particle count must be >= 1, got {0}")]
    InvalidCount(u64),
    #[error("active mass {active} kg exceeds total mass {total} kg")]
    ActiveMassExceedsTotal { active: f64, total: f64 },
    #[error("{what} must be a unit vector, |v| = {norm}")]
    NotUnitVector { what: &'static str, norm: f64 },
    #[error("maneuver needs at least one particle")]
    NoParticles,
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error(transparent)]
    Vacuum(#[from] VacuumError),
    #[error(transparent)]
    Dimension(#[from] DimensionError),
}
