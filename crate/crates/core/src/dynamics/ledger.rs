//! Momentum bookkeeping for maneuver sequences.
//!
//! Every entry books the momentum change of the vacuum field and the equal and
//! opposite change of the particle array. Vacuum momentum of a particle is
//! `A ħ χ_xy / a` along [`MOMENTUM_AXIS`]; force-channel impulses act on the
//! particles.

use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use super::forces::{channel_cavity, channel_chi_dot, force_decomposed, integrate};
use super::maneuver::{delta_v_aggregation, Maneuver};
use super::DynamicsError;
use crate::material::{Particle, ProperRotation};
use crate::quantities::{Constants, Quantity};
use crate::vacuum::{VacuumModel, MOMENTUM_AXIS};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerEntry {
    pub maneuver_id: usize,
    #[serde(rename = "type")]
    pub kind: &'static str,
    pub dp_particles: [f64; 3],
    pub dp_vacuum: [f64; 3],
    /// Payload velocity after this entry.
    pub cumulative_v: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ImpulseLedger {
    pub entries: Vec<LedgerEntry>,
    pub cumulative_v: [f64; 3],
}

impl ImpulseLedger {
    pub fn total_dp_particles(&self) -> [f64; 3] {
        self.entries.iter().fold([0.0; 3], |acc, e| add(acc, e.dp_particles))
    }

    /// Largest |Δp_particles + Δp_vacuum| relative to |Δp_particles| over all entries.
    pub fn max_conservation_error(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| {
                let residual = norm(add(e.dp_particles, e.dp_vacuum));
                let scale = norm(e.dp_particles);
                if scale == 0.0 {
                    residual
                } else {
                    residual / scale
                }
            })
            .fold(0.0, f64::max)
    }

    pub fn write_json_lines<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for e in &self.entries {
            serde_json::to_writer(&mut out, e)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(v: [f64; 3], s: f64) -> [f64; 3] {
    v.map(|x| x * s)
}

fn norm(v: [f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[derive(Debug, Error)]
pub enum SequenceError {
    #[error("invalid sequence setup: {0}")]
    Setup(DynamicsError),
    #[error("maneuver {index} failed: {source}")]
    Maneuver {
        index: usize,
        source: DynamicsError,
        /// Entries booked before the failing maneuver.
        ledger: Box<ImpulseLedger>,
    },
}

/// Particle array plus ledger, advanced one maneuver at a time.
#[derive(Debug, Clone)]
pub struct ManeuverSequence {
    particles: Vec<Particle>,
    m_total: f64,
    model: VacuumModel,
    ledger: ImpulseLedger,
}

impl ManeuverSequence {
    pub fn new(particles: Vec<Particle>, m_total: f64, model: VacuumModel) -> Result<Self, DynamicsError> {
        if !m_total.is_finite() || m_total <= 0.0 {
            return Err(DynamicsError::NonPositive {
                what: "total mass",
                value: m_total,
            });
        }
        model.validate()?;
        Ok(Self {
            particles,
            m_total,
            model,
            ledger: ImpulseLedger::default(),
        })
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    pub fn ledger(&self) -> &ImpulseLedger {
        &self.ledger
    }

    pub fn into_ledger(self) -> ImpulseLedger {
        self.ledger
    }

    /// Applies one maneuver; on error nothing is booked and particles are unchanged.
    pub fn apply(&mut self, maneuver: &Maneuver) -> Result<&LedgerEntry, DynamicsError> {
        maneuver.validate()?;
        let (dp_particles, particles) = self.impulse(maneuver)?;
        if dp_particles.iter().any(|x| !x.is_finite()) {
            return Err(DynamicsError::NonFiniteSample);
        }
        if let Some(p) = particles {
            self.particles = p;
        }
        let cumulative_v = add(self.ledger.cumulative_v, scale(dp_particles, 1.0 / self.m_total));
        self.ledger.cumulative_v = cumulative_v;
        self.ledger.entries.push(LedgerEntry {
            maneuver_id: self.ledger.entries.len(),
            kind: maneuver.kind(),
            dp_particles,
            dp_vacuum: dp_particles.map(|x| -x),
            cumulative_v,
        });
        Ok(self.ledger.entries.last().expect("just pushed"))
    }

    /// Momentum handed to the particles, and the updated array when the
    /// maneuver changes orientations.
    fn impulse(&self, maneuver: &Maneuver) -> Result<([f64; 3], Option<Vec<Particle>>), DynamicsError> {
        let hbar = Constants::CODATA.hbar;
        match maneuver {
            Maneuver::Rotation { axis, angle } => {
                let r = ProperRotation::from_axis_angle(*axis, *angle)?;
                let mut dp_vacuum = 0.0;
                let mut rotated = Vec::with_capacity(self.particles.len());
                for p in &self.particles {
                    let q = p.rotated(&r);
                    // Vacuum momentum per unit χ for this particle.
                    let per_chi = Quantity::dimensionless(self.model.prefactor_a) * hbar / Quantity::length(p.size_a());
                    dp_vacuum += channel_chi_dot(per_chi, p.oriented_chi_xy(), q.oriented_chi_xy()).value;
                    rotated.push(q);
                }
                Ok((scale(MOMENTUM_AXIS, -dp_vacuum), Some(rotated)))
            }
            Maneuver::Aggregation { n, a_m, direction } => {
                let template = self.particles.first().ok_or(DynamicsError::NoParticles)?;
                let rho = template.density_rho();
                let dv = delta_v_aggregation(*a_m, rho, template.oriented_chi_xy(), *n, &self.model)?;
                let merged_mass = *n as f64 * rho * a_m.powi(3);
                Ok((scale(*direction, merged_mass * dv.value), None))
            }
            Maneuver::FieldModulation { series } => {
                let mut dp = 0.0;
                for p in &self.particles {
                    let d = force_decomposed(p, series)?;
                    dp += integrate(&d.vacuum_capable(), series.dt());
                }
                Ok((scale(MOMENTUM_AXIS, dp), None))
            }
            Maneuver::CavityModulation { db2_dt, duration_s } => {
                let mut dp = 0.0;
                for p in &self.particles {
                    dp += channel_cavity(p.oriented_chi_xy(), *db2_dt, *duration_s)?;
                }
                Ok((scale(MOMENTUM_AXIS, dp), None))
            }
        }
    }
}

/// Applies `maneuvers` in order to the particle array.
pub fn run_maneuver_sequence(
    particles: &[Particle],
    maneuvers: &[Maneuver],
    m_total: f64,
    model: &VacuumModel,
) -> Result<ImpulseLedger, SequenceError> {
    let mut seq = ManeuverSequence::new(particles.to_vec(), m_total, *model).map_err(SequenceError::Setup)?;
    for (index, m) in maneuvers.iter().enumerate() {
        if let Err(source) = seq.apply(m) {
            return Err(SequenceError::Maneuver {
                index,
                source,
                ledger: Box::new(seq.into_ledger()),
            });
        }
    }
    Ok(seq.into_ledger())
}
