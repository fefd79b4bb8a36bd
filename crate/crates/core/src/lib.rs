//! Momentum exchange between magneto-electric particles and electromagnetic
//! zero-point fluctuations.
//!
//! * [`quantities`]: dimension-tagged scalars and Gaussian/SI conversion.
//! * [`material`]: magneto-electric tensors, proper rotations, particles.
//! * [`vacuum`]: size cutoff, ⟨B²_vac⟩, closed-form vacuum momentum and the
//!   mode-sum oracle.
//! * [`dynamics`]: force decomposition, transfer channels, maneuver Δv and the
//!   impulse ledger.
//! * [`mission`]: attitude-rate planning, design inversion and sweeps.

pub mod dynamics;
pub mod material;
pub mod mission;
pub mod quantities;
pub mod vacuum;

pub use dynamics::{
    delta_v_aggregation, delta_v_rotation, force_decomposed, force_direct, payload_delta_v, run_maneuver_sequence,
    DynamicsError, FieldTimeSeries, ImpulseLedger, Maneuver,
};
pub use material::{MagnetoElectricTensor, MaterialError, Particle, ProperRotation};
pub use mission::{evaluate_mission, MissionError, MissionReport, MissionSpec};
pub use quantities::{Constants, Dimension, DimensionError, Quantity, C, HBAR};
pub use vacuum::{CutoffConvention, ModeGrid, VacuumError, VacuumModel};
