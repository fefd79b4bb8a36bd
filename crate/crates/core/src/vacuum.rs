//! Zero-point field model.
//!
//! Three pieces live here:
//!
//! * the size cutoff that maps a particle size `a` to the largest contributing
//!   wavenumber,
//! * ⟨B²_vac⟩ below that cutoff, from the zero-point spectral energy density
//!   ħω³/(2π²c³) with ⟨E²⟩ = ⟨B²⟩ (Gaussian convention, so ⟨B²⟩ = 4π·u),
//! * the stored vacuum momentum `p = A ħ χ / a` and a discretized mode sum
//!   that reproduces its scaling independently.
//!
//! The mode sum gives every mode inside the cutoff ball a half-quantum
//! momentum ħk/2, weights it by χ with the sign of its projection on the
//! distinguished axis, counts `dk³ a³ / (2π)³` modes per grid cell and two
//! polarizations. It is a scaling oracle; it does not pin the value of A.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantities::{Constants, Dimension, Quantity, HBAR};

/// Axis along which vacuum momentum for the (x, y) tensor component is reported.
pub const MOMENTUM_AXIS: [f64; 3] = [0.0, 0.0, 1.0];

pub const DEFAULT_PREFACTOR_A: f64 = 1e-2;

pub const MIN_GRID_POINTS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VacuumError {
    #[error("particle size must be > 0, got {0} m")]
    NonPositiveSize(f64),
    #[error("prefactor A must be > 0, got {0}")]
    NonPositivePrefactor(f64),
    #[error("mode grid is empty")]
    EmptyGrid,
    #[error("mode grid needs at least {MIN_GRID_POINTS} points per axis, got {0}")]
    GridTooCoarse(usize),
    #[error("cutoff wavenumber must be finite and > 0, got {0} 1/m")]
    BadCutoff(f64),
    #[error("axis must be a non-zero finite vector")]
    BadAxis,
    #[error("csv output failed: {0}")]
    Csv(String),
}

/// How a particle size maps onto the cutoff wavenumber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutoffConvention {
    /// λ_min = a, k_cut = 2π/a.
    #[default]
    WavelengthEqualsSize,
    /// λ_min = 2a, k_cut = π/a.
    HalfWavelength,
    /// Reduced wavelength c/ω equal to a, k_cut = 1/a.
    ReducedWavelength,
}

impl CutoffConvention {
    /// k_cut·a for this convention.
    pub fn k_times_size(self) -> f64 {
        match self {
            CutoffConvention::WavelengthEqualsSize => 2.0 * std::f64::consts::PI,
            CutoffConvention::HalfWavelength => std::f64::consts::PI,
            CutoffConvention::ReducedWavelength => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VacuumModel {
    pub prefactor_a: f64,
    pub cutoff: CutoffConvention,
}

impl Default for VacuumModel {
    fn default() -> Self {
        Self {
            prefactor_a: DEFAULT_PREFACTOR_A,
            cutoff: CutoffConvention::default(),
        }
    }
}

impl VacuumModel {
    pub fn new(prefactor_a: f64, cutoff: CutoffConvention) -> Result<Self, VacuumError> {
        let m = Self { prefactor_a, cutoff };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), VacuumError> {
        if !self.prefactor_a.is_finite() || self.prefactor_a <= 0.0 {
            return Err(VacuumError::NonPositivePrefactor(self.prefactor_a));
        }
        Ok(())
    }

    pub fn k_cut(&self, a: f64) -> Result<Quantity, VacuumError> {
        check_size(a)?;
        Ok(Quantity::new(self.cutoff.k_times_size() / a, Dimension::WAVENUMBER))
    }
}

fn check_size(a: f64) -> Result<(), VacuumError> {
    if !a.is_finite() || a <= 0.0 {
        return Err(VacuumError::NonPositiveSize(a));
    }
    Ok(())
}

/// ⟨B²_vac⟩ = ħω_cut⁴/(2πc³), returned in energy-density units (J/m³).
pub fn vacuum_b_squared(a: f64, model: &VacuumModel) -> Result<Quantity, VacuumError> {
    let k = Constants::CODATA;
    let omega = k.c * model.k_cut(a)?;
    Ok(k.hbar * omega.powi(4) / (k.c.powi(3) * Quantity::dimensionless(2.0 * std::f64::consts::PI)))
}

/// p_vac = A ħ χ / a, signed along [`MOMENTUM_AXIS`].
pub fn vacuum_momentum_closed_form(chi_xy: f64, a: f64, model: &VacuumModel) -> Result<Quantity, VacuumError> {
    check_size(a)?;
    model.validate()?;
    let k = Constants::CODATA;
    Ok(Quantity::dimensionless(model.prefactor_a * chi_xy) * k.hbar / Quantity::length(a))
}

/// Cell-centred cubic grid over [-k_cut, k_cut]³; only cells whose centre lies
/// in the ball |k| ≤ k_cut are summed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeGrid {
    n_per_axis: usize,
    k_cut: f64,
}

impl ModeGrid {
    pub fn new(n_per_axis: usize, k_cut: f64) -> Result<Self, VacuumError> {
        if n_per_axis == 0 {
            return Err(VacuumError::EmptyGrid);
        }
        if n_per_axis < MIN_GRID_POINTS {
            return Err(VacuumError::GridTooCoarse(n_per_axis));
        }
        if !k_cut.is_finite() || k_cut <= 0.0 {
            return Err(VacuumError::BadCutoff(k_cut));
        }
        Ok(Self { n_per_axis, k_cut })
    }

    pub fn for_size(n_per_axis: usize, a: f64, model: &VacuumModel) -> Result<Self, VacuumError> {
        Self::new(n_per_axis, model.k_cut(a)?.value)
    }

    pub fn n_per_axis(&self) -> usize {
        self.n_per_axis
    }

    pub fn k_cut(&self) -> f64 {
        self.k_cut
    }

    pub fn spacing(&self) -> f64 {
        self.k_cut / self.n_per_axis as f64
    }

    /// Σ sign(u·axis)·u over cell centres u = k/k_cut inside the unit ball.
    /// Slices along the first index are summed in parallel and reduced in
    /// index order, so the result does not depend on the thread count.
    fn signed_lattice_sum(&self, axis: [f64; 3]) -> [f64; 3] {
        let n = self.n_per_axis as i64;
        let inv = 1.0 / n as f64;
        let partials: Vec<[f64; 3]> = (-n..n)
            .into_par_iter()
            .map(|i| {
                let ux = (i as f64 + 0.5) * inv;
                let mut acc = [0.0; 3];
                for j in -n..n {
                    let uy = (j as f64 + 0.5) * inv;
                    let rxy = ux * ux + uy * uy;
                    if rxy > 1.0 {
                        continue;
                    }
                    for l in -n..n {
                        let uz = (l as f64 + 0.5) * inv;
                        if rxy + uz * uz > 1.0 {
                            continue;
                        }
                        let proj = ux * axis[0] + uy * axis[1] + uz * axis[2];
                        if proj > 0.0 {
                            acc[0] += ux;
                            acc[1] += uy;
                            acc[2] += uz;
                        } else if proj < 0.0 {
                            acc[0] -= ux;
                            acc[1] -= uy;
                            acc[2] -= uz;
                        }
                    }
                }
                acc
            })
            .collect();
        partials.iter().fold([0.0; 3], |mut s, p| {
            for d in 0..3 {
                s[d] += p[d];
            }
            s
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    /// Momentum vector, kg·m/s.
    pub momentum: [f64; 3],
    /// Signed component along the distinguished axis.
    pub momentum_along_axis: Quantity,
    /// |p|·a/(ħ|χ|); `None` when χ = 0.
    pub effective_a: Option<f64>,
}

/// Mode-sum oracle with the distinguished axis along [`MOMENTUM_AXIS`].
pub fn mode_sum_oracle(chi_xy: f64, a: f64, grid: &ModeGrid) -> Result<OracleResult, VacuumError> {
    mode_sum_oracle_along(chi_xy, a, grid, MOMENTUM_AXIS)
}

pub fn mode_sum_oracle_along(
    chi_xy: f64,
    a: f64,
    grid: &ModeGrid,
    axis: [f64; 3],
) -> Result<OracleResult, VacuumError> {
    check_size(a)?;
    let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !norm.is_finite() || norm == 0.0 {
        return Err(VacuumError::BadAxis);
    }
    let axis = axis.map(|x| x / norm);
    let sum = grid.signed_lattice_sum(axis);
    // Two polarizations × ħ/2 per mode, dk³a³/(2π)³ modes per cell.
    let cell_modes = (grid.spacing() * a / (2.0 * std::f64::consts::PI)).powi(3);
    let scale = HBAR * grid.k_cut() * cell_modes;
    let momentum = sum.map(|s| chi_xy * (scale * s));
    let along = momentum[0] * axis[0] + momentum[1] * axis[1] + momentum[2] * axis[2];
    let effective_a = (chi_xy != 0.0).then(|| along.abs() * a / (HBAR * chi_xy.abs()));
    Ok(OracleResult {
        momentum,
        momentum_along_axis: Quantity::momentum(along),
        effective_a,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleRow {
    pub n_per_axis: usize,
    pub a_m: f64,
    pub chi: f64,
    pub p_kg_m_s: f64,
    #[serde(rename = "effective_A")]
    pub effective_a: f64,
}

/// Runs the oracle over every (size, resolution) pair, sizes outermost.
pub fn convergence_study(
    chi_xy: f64,
    sizes: &[f64],
    resolutions: &[usize],
    model: &VacuumModel,
) -> Result<Vec<OracleRow>, VacuumError> {
    let mut rows = Vec::with_capacity(sizes.len() * resolutions.len());
    for &a in sizes {
        for &n in resolutions {
            let grid = ModeGrid::for_size(n, a, model)?;
            let r = mode_sum_oracle(chi_xy, a, &grid)?;
            rows.push(OracleRow {
                n_per_axis: n,
                a_m: a,
                chi: chi_xy,
                p_kg_m_s: r.momentum_along_axis.value,
                effective_a: r.effective_a.unwrap_or(f64::NAN),
            });
        }
    }
    Ok(rows)
}

pub const ORACLE_CSV_HEADER: [&str; 5] = ["n_per_axis", "a_m", "chi", "p_kg_m_s", "effective_A"];

pub fn write_convergence_csv<W: Write>(rows: &[OracleRow], out: W) -> Result<(), VacuumError> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| VacuumError::Csv(e.to_string());
    w.write_record(ORACLE_CSV_HEADER).map_err(err)?;
    for r in rows {
        w.write_record([
            r.n_per_axis.to_string(),
            r.a_m.to_string(),
            r.chi.to_string(),
            r.p_kg_m_s.to_string(),
            r.effective_a.to_string(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| VacuumError::Csv(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn k_cut_conventions() {
        let m = VacuumModel::default();
        assert_eq!(m.cutoff, CutoffConvention::WavelengthEqualsSize);
        assert_eq!(m.prefactor_a, 1e-2);
        let a = 2e-9;
        assert!(rel(m.k_cut(a).unwrap().value, 2.0 * std::f64::consts::PI / a) < 1e-15);
        let half = VacuumModel::new(1e-2, CutoffConvention::HalfWavelength).unwrap();
        assert!(rel(half.k_cut(a).unwrap().value, std::f64::consts::PI / a) < 1e-15);
        let reduced = VacuumModel::new(1e-2, CutoffConvention::ReducedWavelength).unwrap();
        assert_eq!(reduced.k_cut(a).unwrap().value, 1.0 / a);
        assert!(VacuumModel::new(0.0, CutoffConvention::HalfWavelength).is_err());
    }

    #[test]
    fn b_squared_quartic_scaling() {
        let m = VacuumModel::default();
        let b1 = vacuum_b_squared(1e-9, &m).unwrap();
        let b2 = vacuum_b_squared(2e-9, &m).unwrap();
        assert_eq!(b1.dim, Dimension::ENERGY_DENSITY);
        assert!(rel(b1.value / b2.value, 16.0) < 1e-14);
        assert!(vacuum_b_squared(1e300, &m).unwrap().value < 1e-300);
        assert!(matches!(
            vacuum_b_squared(0.0, &m),
            Err(VacuumError::NonPositiveSize(_))
        ));
    }

    #[test]
    fn closed_form_examples() {
        let m = VacuumModel::default();
        assert_eq!(vacuum_momentum_closed_form(0.0, 1e-9, &m).unwrap().value, 0.0);
        let p = vacuum_momentum_closed_form(1e-3, 1e-9, &m).unwrap();
        assert_eq!(p.dim, Dimension::MOMENTUM);
        assert!(rel(p.value, 1e-2 * 1.054_571_817e-34 * 1e-3 / 1e-9) < 1e-14);
        assert!(rel(p.value, 1.05e-30) < 5e-3);
        let n = vacuum_momentum_closed_form(-1e-3, 1e-9, &m).unwrap();
        assert_eq!(n.value, -p.value);
        assert!(vacuum_momentum_closed_form(1e-3, -1.0, &m).is_err());
    }

    #[test]
    fn grid_validation() {
        assert_eq!(ModeGrid::new(0, 1.0), Err(VacuumError::EmptyGrid));
        assert_eq!(ModeGrid::new(7, 1.0), Err(VacuumError::GridTooCoarse(7)));
        assert!(ModeGrid::new(8, 0.0).is_err());
        let g = ModeGrid::new(16, 4.0).unwrap();
        assert_eq!(g.spacing(), 0.25);
    }

    #[test]
    fn oracle_zero_chi_is_exactly_zero() {
        let g = ModeGrid::for_size(16, 1e-9, &VacuumModel::default()).unwrap();
        let r = mode_sum_oracle(0.0, 1e-9, &g).unwrap();
        assert_eq!(r.momentum_along_axis.value, 0.0);
        assert_eq!(r.effective_a, None);
    }

    #[test]
    fn oracle_halves_when_size_doubles() {
        let m = VacuumModel::default();
        let chi = 1e-3;
        // Fixed grid resolution: same n, grid rebuilt for each size.
        let p1 = mode_sum_oracle(chi, 1e-9, &ModeGrid::for_size(64, 1e-9, &m).unwrap()).unwrap();
        let p2 = mode_sum_oracle(chi, 2e-9, &ModeGrid::for_size(64, 2e-9, &m).unwrap()).unwrap();
        let ratio = p1.momentum_along_axis.value / p2.momentum_along_axis.value;
        assert!((ratio - 2.0).abs() <= 0.04);
    }

    #[test]
    fn oracle_is_odd_under_axis_reflection() {
        let g = ModeGrid::new(24, 1e9).unwrap();
        let up = mode_sum_oracle_along(1e-3, 1e-9, &g, [0.0, 0.0, 1.0]).unwrap();
        let down = mode_sum_oracle_along(1e-3, 1e-9, &g, [0.0, 0.0, -1.0]).unwrap();
        for d in 0..3 {
            assert_eq!(down.momentum[d], -up.momentum[d]);
        }
        assert_eq!(down.effective_a, up.effective_a);
    }

    #[test]
    fn oracle_sign_matches_closed_form() {
        let m = VacuumModel::default();
        let g = ModeGrid::for_size(16, 1e-9, &m).unwrap();
        for chi in [1e-3, -1e-3, 5e-5, -0.2] {
            let o = mode_sum_oracle(chi, 1e-9, &g).unwrap().momentum_along_axis.value;
            let c = vacuum_momentum_closed_form(chi, 1e-9, &m).unwrap().value;
            assert_eq!(o.signum(), c.signum());
        }
    }

    #[test]
    fn oracle_is_linear_in_chi() {
        let g = ModeGrid::new(16, 3e9).unwrap();
        let p1 = mode_sum_oracle(1.7e-3, 1e-9, &g).unwrap().momentum_along_axis.value;
        let p2 = mode_sum_oracle(3.4e-3, 1e-9, &g).unwrap().momentum_along_axis.value;
        assert!(rel(p2, 2.0 * p1) <= 1e-12);
    }

    #[test]
    fn oracle_result_independent_of_thread_count() {
        let g = ModeGrid::new(32, 2e9).unwrap();
        let parallel = mode_sum_oracle(1e-3, 1e-9, &g).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = pool.install(|| mode_sum_oracle(1e-3, 1e-9, &g).unwrap());
        assert_eq!(parallel, serial);
    }

    #[test]
    fn convergence_csv_header_and_rows() {
        let rows = convergence_study(1e-3, &[1e-9, 2e-9], &[8, 16], &VacuumModel::default()).unwrap();
        assert_eq!(rows.len(), 4);
        let mut buf = Vec::new();
        write_convergence_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "n_per_axis,a_m,chi,p_kg_m_s,effective_A");
        assert_eq!(lines.count(), 4);
    }
}
