//! Cartesian parameter sweeps emitted as CSV.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{evaluate_mission, rate_to_tangential_v, tangential_v_to_rate, MissionError, MissionSpec};
use crate::dynamics::{delta_v_rotation, delta_v_rotation_fixed_mass};
use crate::material::Particle;
use crate::vacuum::VacuumModel;

pub const DEFAULT_SWEEP_CAP: u64 = 10_000_000;

pub const SWEEP_CSV_HEADER: [&str; 9] = [
    "chi0",
    "a_m",
    "rho_kg_m3",
    "fraction",
    "A",
    "dv_m_s",
    "dV_m_s",
    "rate_deg_day",
    "feasible",
];

/// Value lists per swept parameter. Rows run in lexicographic order with
/// `chi0` outermost and `prefactor_a` innermost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub chi0: Vec<f64>,
    pub a_m: Vec<f64>,
    pub rho: Vec<f64>,
    pub fraction: Vec<f64>,
    pub prefactor_a: Vec<f64>,
}

impl SweepGrid {
    /// One-point grid at the values of `spec`.
    pub fn at(spec: &MissionSpec) -> Self {
        Self {
            chi0: vec![spec.chi0],
            a_m: vec![spec.particle_size],
            rho: vec![spec.particle_density],
            fraction: vec![spec.active_mass_fraction],
            prefactor_a: vec![spec.prefactor_a],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SweepMode {
    /// Full mission evaluation at fixed density: Δv ∝ 1/(ρa⁴).
    #[default]
    Mission,
    /// Per-particle mass held fixed: Δv = 2Aħχ/(m·a), density axis ignored
    /// and reported as m/a³.
    FixedParticleMass { mass_kg: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub mode: SweepMode,
    pub parallel: bool,
    pub cap: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            mode: SweepMode::Mission,
            parallel: true,
            cap: DEFAULT_SWEEP_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub chi0: f64,
    pub a_m: f64,
    pub rho_kg_m3: f64,
    pub fraction: f64,
    #[serde(rename = "A")]
    pub prefactor_a: f64,
    pub dv_m_s: f64,
    #[serde(rename = "dV_m_s")]
    pub payload_dv_m_s: f64,
    pub rate_deg_day: f64,
    pub feasible: bool,
}

impl SweepRow {
    fn record(&self) -> [String; 9] {
        [
            self.chi0.to_string(),
            self.a_m.to_string(),
            self.rho_kg_m3.to_string(),
            self.fraction.to_string(),
            self.prefactor_a.to_string(),
            self.dv_m_s.to_string(),
            self.payload_dv_m_s.to_string(),
            self.rate_deg_day.to_string(),
            self.feasible.to_string(),
        ]
    }
}

struct Axes<'a> {
    lists: [&'a [f64]; 5],
    lens: [usize; 5],
}

impl<'a> Axes<'a> {
    fn new(grid: &'a SweepGrid, mode: SweepMode) -> Result<Self, MissionError> {
        let rho: &'a [f64] = match mode {
            SweepMode::Mission => &grid.rho,
            SweepMode::FixedParticleMass { .. } => &[0.0],
        };
        let lists = [
            &grid.chi0[..],
            &grid.a_m[..],
            rho,
            &grid.fraction[..],
            &grid.prefactor_a[..],
        ];
        let names = ["chi0", "a_m", "rho", "fraction", "A"];
        for (l, n) in lists.iter().zip(names) {
            if l.is_empty() {
                return Err(MissionError::EmptyAxis(n));
            }
        }
        Ok(Self {
            lists,
            lens: lists.map(|l| l.len()),
        })
    }

    fn count(&self) -> u128 {
        self.lens.iter().map(|&l| l as u128).product()
    }

    /// Values at flat index `i`, last axis fastest.
    fn point(&self, mut i: usize) -> [f64; 5] {
        let mut out = [0.0; 5];
        for d in (0..5).rev() {
            out[d] = self.lists[d][i % self.lens[d]];
            i /= self.lens[d];
        }
        out
    }
}

fn evaluate_row(base: &MissionSpec, mode: SweepMode, p: [f64; 5]) -> Result<SweepRow, MissionError> {
    let [chi0, a_m, rho, fraction, prefactor_a] = p;
    match mode {
        SweepMode::Mission => {
            let spec = MissionSpec {
                chi0,
                particle_size: a_m,
                particle_density: rho,
                active_mass_fraction: fraction,
                prefactor_a,
                ..*base
            };
            let report = evaluate_mission(&spec)?;
            let dv = delta_v_rotation(&Particle::simple(chi0, a_m, rho)?, &spec.vacuum_model())?.value;
            Ok(SweepRow {
                chi0,
                a_m,
                rho_kg_m3: rho,
                fraction,
                prefactor_a,
                dv_m_s: dv,
                payload_dv_m_s: report.achieved_tangential_v,
                rate_deg_day: tangential_v_to_rate(report.achieved_tangential_v, base.wheel_radius),
                feasible: report.feasible,
            })
        }
        SweepMode::FixedParticleMass { mass_kg } => {
            let spec = MissionSpec {
                chi0,
                particle_size: a_m,
                active_mass_fraction: fraction,
                prefactor_a,
                ..*base
            };
            spec.validate()?;
            let model = VacuumModel {
                prefactor_a,
                ..spec.vacuum_model()
            };
            let dv = delta_v_rotation_fixed_mass(chi0, a_m, mass_kg, &model)?.value;
            let payload = dv * fraction;
            let required = rate_to_tangential_v(base.target_rate, base.wheel_radius).value;
            Ok(SweepRow {
                chi0,
                a_m,
                rho_kg_m3: mass_kg / a_m.powi(3),
                fraction,
                prefactor_a,
                dv_m_s: dv,
                payload_dv_m_s: payload,
                rate_deg_day: tangential_v_to_rate(payload, base.wheel_radius),
                feasible: payload >= required,
            })
        }
    }
}

/// Evaluates every grid point; rows come back in lexicographic grid order
/// whether or not the work runs in parallel.
pub fn sweep_rows(base: &MissionSpec, grid: &SweepGrid, options: &SweepOptions) -> Result<Vec<SweepRow>, MissionError> {
    let axes = Axes::new(grid, options.mode)?;
    let count = axes.count();
    if count > u128::from(options.cap) {
        return Err(MissionError::SweepTooLarge {
            count,
            cap: options.cap,
        });
    }
    let count = count as usize;
    let row = |i: usize| {
        evaluate_row(base, options.mode, axes.point(i)).map_err(|e| MissionError::SweepRow {
            index: i,
            message: e.to_string(),
        })
    };
    if options.parallel {
        (0..count).into_par_iter().map(row).collect()
    } else {
        (0..count).map(row).collect()
    }
}

/// Writes the sweep as CSV and returns the number of data rows.
pub fn sweep<W: Write>(
    base: &MissionSpec,
    grid: &SweepGrid,
    options: &SweepOptions,
    out: W,
) -> Result<usize, MissionError> {
    let rows = sweep_rows(base, grid, options)?;
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| MissionError::Output(e.to_string());
    w.write_record(SWEEP_CSV_HEADER).map_err(err)?;
    for r in &rows {
        w.write_record(r.record()).map_err(err)?;
    }
    w.flush().map_err(|e| MissionError::Output(e.to_string()))?;
    Ok(rows.len())
}
