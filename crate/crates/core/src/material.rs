//! Magneto-electric tensors, proper rotations and particles.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantities::{Dimension, Quantity};

/// Orthogonality and determinant tolerance for proper rotations.
pub const ROTATION_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaterialError {
    #[error("improper rotation: det = {det}")]
    ImproperRotation { det: f64 },
    #[error("matrix is not orthogonal: max |RᵀR - I| = {deviation:e}")]
    NotOrthogonal { deviation: f64 },
    #[error("rotation axis has zero length")]
    ZeroAxis,
    #[error("non-finite entry in {field}")]
    NonFinite { field: &'static str },
    #[error("chi0[{row}][{col}] = {value} exceeds the |chi0| <= 1 bound")]
    ChiOutOfBounds { row: usize, col: usize, value: f64 },
    #[error("particle size must be > 0, got {0} m")]
    NonPositiveSize(f64),
    #[error("particle density must be > 0, got {0} kg/m^3")]
    NonPositiveDensity(f64),
    #[error("dielectric constant must be >= 1, got {0}")]
    EpsilonBelowOne(f64),
    #[error("expected 9 row-major entries for {field}, got {len}")]
    BadMatrixLength { field: &'static str, len: usize },
}

/// A 3×3 orthogonal matrix with determinant +1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProperRotation(Matrix3<f64>);

impl ProperRotation {
    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    pub fn new(m: Matrix3<f64>) -> Result<Self, MaterialError> {
        if m.iter().any(|x| !x.is_finite()) {
            return Err(MaterialError::NonFinite { field: "rotation" });
        }
        let det = m.determinant();
        if (det + 1.0).abs() <= ROTATION_TOL {
            return Err(MaterialError::ImproperRotation { det });
        }
        let deviation = (m.transpose() * m - Matrix3::identity()).amax();
        if deviation > ROTATION_TOL {
            return Err(MaterialError::NotOrthogonal { deviation });
        }
        if (det - 1.0).abs() > ROTATION_TOL {
            return Err(MaterialError::ImproperRotation { det });
        }
        Ok(Self(m))
    }

    /// Rodrigues rotation about `axis` (normalized here) by `angle` radians.
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Result<Self, MaterialError> {
        let v = Vector3::from(axis);
        let n = v.norm();
        if !(n.is_finite() && angle.is_finite()) {
            return Err(MaterialError::NonFinite { field: "axis/angle" });
        }
        if n == 0.0 {
            return Err(MaterialError::ZeroAxis);
        }
        let u = v / n;
        let k = u.cross_matrix();
        let m = Matrix3::identity() + k * angle.sin() + k * k * (1.0 - angle.cos());
        Ok(Self(orthonormalize(m)))
    }

    pub fn from_row_major(entries: &[f64]) -> Result<Self, MaterialError> {
        Self::new(matrix_from_row_major(entries, "orientation")?)
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn to_row_major(&self) -> [f64; 9] {
        row_major(&self.0)
    }

    /// `self` applied after `first`, re-orthonormalized.
    pub fn after(&self, first: &ProperRotation) -> ProperRotation {
        ProperRotation(orthonormalize(self.0 * first.0))
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }
}

/// Gram-Schmidt on the columns; keeps a right-handed frame.
fn orthonormalize(m: Matrix3<f64>) -> Matrix3<f64> {
    let c0 = m.column(0).normalize();
    let c1 = m.column(1) - c0 * c0.dot(&m.column(1));
    let c1 = c1.normalize();
    let c2 = c0.cross(&c1);
    Matrix3::from_columns(&[c0, c1, c2])
}

fn matrix_from_row_major(entries: &[f64], field: &'static str) -> Result<Matrix3<f64>, MaterialError> {
    if entries.len() != 9 {
        return Err(MaterialError::BadMatrixLength {
            field,
            len: entries.len(),
        });
    }
    Ok(Matrix3::from_row_slice(entries))
}

fn row_major(m: &Matrix3<f64>) -> [f64; 9] {
    let mut out = [0.0; 9];
    for r in 0..3 {
        for c in 0..3 {
            out[3 * r + c] = m[(r, c)];
        }
    }
    out
}

/// Intrinsic χ⁰ plus scalar field-induced responses of the xy component.
///
/// `kappa1` multiplies E_x·B_y, `kappa2` multiplies E_x and `kappa3`
/// multiplies B_y. The κ responses belong to the driven xy component and are
/// not transformed under rotation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TensorRecord", into = "TensorRecord")]
pub struct MagnetoElectricTensor {
    pub chi0: Matrix3<f64>,
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
}

impl MagnetoElectricTensor {
    pub fn new(chi0: Matrix3<f64>, kappa1: f64, kappa2: f64, kappa3: f64) -> Result<Self, MaterialError> {
        let t = Self {
            chi0,
            kappa1,
            kappa2,
            kappa3,
        };
        t.validate()?;
        Ok(t)
    }

    /// Tensor whose only non-zero entry is χ⁰_xy.
    pub fn xy_only(chi_xy: f64) -> Result<Self, MaterialError> {
        let mut chi0 = Matrix3::zeros();
        chi0[(0, 1)] = chi_xy;
        Self::new(chi0, 0.0, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<(), MaterialError> {
        for r in 0..3 {
            for c in 0..3 {
                let v = self.chi0[(r, c)];
                if !v.is_finite() {
                    return Err(MaterialError::NonFinite { field: "chi0" });
                }
                if v.abs() > 1.0 {
                    return Err(MaterialError::ChiOutOfBounds {
                        row: r,
                        col: c,
                        value: v,
                    });
                }
            }
        }
        if ![self.kappa1, self.kappa2, self.kappa3].iter().all(|k| k.is_finite()) {
            return Err(MaterialError::NonFinite { field: "kappa" });
        }
        Ok(())
    }

    pub fn chi_xy(&self) -> f64 {
        self.chi0[(0, 1)]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.chi0.norm()
    }

    pub fn negated(&self) -> Self {
        Self {
            chi0: -self.chi0,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorRecord {
    chi0: Vec<f64>,
    #[serde(default)]
    kappa1: f64,
    #[serde(default)]
    kappa2: f64,
    #[serde(default)]
    kappa3: f64,
}

impl TryFrom<TensorRecord> for MagnetoElectricTensor {
    type Error = MaterialError;
    fn try_from(r: TensorRecord) -> Result<Self, Self::Error> {
        Self::new(matrix_from_row_major(&r.chi0, "chi0")?, r.kappa1, r.kappa2, r.kappa3)
    }
}

impl From<MagnetoElectricTensor> for TensorRecord {
    fn from(t: MagnetoElectricTensor) -> Self {
        Self {
            chi0: row_major(&t.chi0).to_vec(),
            kappa1: t.kappa1,
            kappa2: t.kappa2,
            kappa3: t.kappa3,
        }
    }
}

/// Orthogonal conjugation χ⁰′ = R χ⁰ Rᵀ.
pub fn rotate_tensor(t: &MagnetoElectricTensor, r: &ProperRotation) -> MagnetoElectricTensor {
    let m = r.matrix();
    MagnetoElectricTensor {
        chi0: m * t.chi0 * m.transpose(),
        ..*t
    }
}

/// χ_xy = χ⁰_xy + κ₁E_xB_y + κ₂E_x + κ₃B_y.
pub fn chi_effective(t: &MagnetoElectricTensor, e_x: f64, b_y: f64) -> f64 {
    t.chi_xy() + t.kappa1 * e_x * b_y + t.kappa2 * e_x + t.kappa3 * b_y
}

/// A cubic magneto-electric particle of side `size_a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParticleRecord", into = "ParticleRecord")]
pub struct Particle {
    size_a: f64,
    density_rho: f64,
    tensor: MagnetoElectricTensor,
    orientation: ProperRotation,
    epsilon: f64,
}

impl Particle {
    pub fn new(
        size_a: f64,
        density_rho: f64,
        tensor: MagnetoElectricTensor,
        orientation: ProperRotation,
        epsilon: f64,
    ) -> Result<Self, MaterialError> {
        if !size_a.is_finite() || size_a <= 0.0 {
            return Err(MaterialError::NonPositiveSize(size_a));
        }
        if !density_rho.is_finite() || density_rho <= 0.0 {
            return Err(MaterialError::NonPositiveDensity(density_rho));
        }
        if !epsilon.is_finite() || epsilon < 1.0 {
            return Err(MaterialError::EpsilonBelowOne(epsilon));
        }
        tensor.validate()?;
        Ok(Self {
            size_a,
            density_rho,
            tensor,
            orientation,
            epsilon,
        })
    }

    /// Unrotated particle with χ⁰ = χ_xy ê_x⊗ê_y and ε = 1.
    pub fn simple(chi_xy: f64, size_a: f64, density_rho: f64) -> Result<Self, MaterialError> {
        Self::new(
            size_a,
            density_rho,
            MagnetoElectricTensor::xy_only(chi_xy)?,
            ProperRotation::identity(),
            1.0,
        )
    }

    pub fn size_a(&self) -> f64 {
        self.size_a
    }

    pub fn density_rho(&self) -> f64 {
        self.density_rho
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Body-frame tensor.
    pub fn tensor(&self) -> &MagnetoElectricTensor {
        &self.tensor
    }

    pub fn orientation(&self) -> &ProperRotation {
        &self.orientation
    }

    /// Tensor in the lab frame at the current orientation.
    pub fn oriented_tensor(&self) -> MagnetoElectricTensor {
        rotate_tensor(&self.tensor, &self.orientation)
    }

    pub fn oriented_chi_xy(&self) -> f64 {
        self.oriented_tensor().chi_xy()
    }

    pub fn mass(&self) -> f64 {
        particle_mass(self).value
    }

    /// Applies `r` on top of the current orientation.
    pub fn rotated(&self, r: &ProperRotation) -> Particle {
        Particle {
            orientation: r.after(&self.orientation),
            ..self.clone()
        }
    }

    pub fn with_tensor(&self, tensor: MagnetoElectricTensor) -> Result<Particle, MaterialError> {
        tensor.validate()?;
        Ok(Particle { tensor, ..self.clone() })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParticleRecord {
    chi0: Vec<f64>,
    #[serde(default)]
    kappa1: f64,
    #[serde(default)]
    kappa2: f64,
    #[serde(default)]
    kappa3: f64,
    size_a_m: f64,
    density_kg_m3: f64,
    #[serde(default = "unit_epsilon")]
    epsilon: f64,
    #[serde(default = "identity_row_major")]
    orientation: Vec<f64>,
}

fn unit_epsilon() -> f64 {
    1.0
}

fn identity_row_major() -> Vec<f64> {
    vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]
}

impl TryFrom<ParticleRecord> for Particle {
    type Error = MaterialError;
    fn try_from(r: ParticleRecord) -> Result<Self, Self::Error> {
        let tensor = MagnetoElectricTensor::new(matrix_from_row_major(&r.chi0, "chi0")?, r.kappa1, r.kappa2, r.kappa3)?;
        let orientation = ProperRotation::from_row_major(&r.orientation)?;
        Particle::new(r.size_a_m, r.density_kg_m3, tensor, orientation, r.epsilon)
    }
}

impl From<Particle> for ParticleRecord {
    fn from(p: Particle) -> Self {
        Self {
            chi0: row_major(&p.tensor.chi0).to_vec(),
            kappa1: p.tensor.kappa1,
            kappa2: p.tensor.kappa2,
            kappa3: p.tensor.kappa3,
            size_a_m: p.size_a,
            density_kg_m3: p.density_rho,
            epsilon: p.epsilon,
            orientation: p.orientation.to_row_major().to_vec(),
        }
    }
}

/// P_x = εE_x + χ_xy(E_x, B_y)·B_y using the lab-frame tensor.
pub fn polarization(p: &Particle, e_x: f64, b_y: f64) -> f64 {
    p.epsilon * e_x + chi_effective(&p.oriented_tensor(), e_x, b_y) * b_y
}

/// m = ρa³.
pub fn particle_mass(p: &Particle) -> Quantity {
    let a = Quantity::length(p.size_a);
    let m = Quantity::mass_density(p.density_rho) * a.powi(3);
    debug_assert_eq!(m.dim, Dimension::MASS);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn pi_about_x() -> ProperRotation {
        ProperRotation::new(Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, -1.0))).unwrap()
    }

    fn generic_tensor() -> MagnetoElectricTensor {
        let chi0 = Matrix3::new(1e-4, 3e-4, -2e-4, 5e-4, -1e-4, 7e-4, 2e-4, -6e-4, 4e-4);
        MagnetoElectricTensor::new(chi0, 0.5, -0.25, 2.0).unwrap()
    }

    #[test]
    fn pi_about_x_flips_xy_only_entry() {
        let t = MagnetoElectricTensor::xy_only(1e-3).unwrap();
        let r = rotate_tensor(&t, &pi_about_x());
        assert_eq!(r.chi_xy(), -1e-3);
        for row in 0..3 {
            for col in 0..3 {
                if (row, col) != (0, 1) {
                    assert_eq!(r.chi0[(row, col)], 0.0);
                }
            }
        }
    }

    #[test]
    fn identity_leaves_tensor_unchanged() {
        let t = generic_tensor();
        assert_eq!(rotate_tensor(&t, &ProperRotation::identity()), t);
    }

    #[test]
    fn quarter_turn_twice_equals_half_turn() {
        let t = generic_tensor();
        let quarter = ProperRotation::from_axis_angle([0.0, 0.0, 1.0], FRAC_PI_2).unwrap();
        let half = ProperRotation::from_axis_angle([0.0, 0.0, 1.0], PI).unwrap();
        let twice = rotate_tensor(&rotate_tensor(&t, &quarter), &quarter);
        let once = rotate_tensor(&t, &half);
        assert!((twice.chi0 - once.chi0).amax() < 1e-12);
    }

    #[test]
    fn kappas_are_carried_through_rotation() {
        let t = generic_tensor();
        let r = ProperRotation::from_axis_angle([1.0, 2.0, 3.0], 0.7).unwrap();
        let rt = rotate_tensor(&t, &r);
        assert_eq!((rt.kappa1, rt.kappa2, rt.kappa3), (t.kappa1, t.kappa2, t.kappa3));
    }

    #[test]
    fn improper_rotation_rejected() {
        let reflection = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0));
        assert!(matches!(
            ProperRotation::new(reflection),
            Err(MaterialError::ImproperRotation { .. })
        ));
        let scaled = Matrix3::identity() * 1.001;
        assert!(matches!(
            ProperRotation::new(scaled),
            Err(MaterialError::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn chi_effective_examples() {
        let t = MagnetoElectricTensor::xy_only(1e-3).unwrap();
        assert_eq!(chi_effective(&t, 0.0, 0.0), 1e-3);

        let mut t = MagnetoElectricTensor::xy_only(0.0).unwrap();
        t.kappa2 = 1.0;
        assert_eq!(chi_effective(&t, 1e-3, 0.0), 1e-3);

        let mut t = MagnetoElectricTensor::xy_only(1e-3).unwrap();
        (t.kappa1, t.kappa2, t.kappa3) = (2.0, 3.0, 5.0);
        let expected = 1e-3 + 2e-3 + 3e-1 + 5e-2;
        assert!((chi_effective(&t, 0.1, 0.01) - expected).abs() < 1e-15);
    }

    #[test]
    fn polarization_examples() {
        let p = Particle::simple(1e-3, 1e-9, 1000.0).unwrap();
        assert_eq!(polarization(&p, 0.0, 0.0), 0.0);

        let vac = Particle::simple(0.0, 1e-9, 1000.0).unwrap();
        assert_eq!(polarization(&vac, 0.37, 0.0), 0.37);

        let p = Particle::new(
            1e-9,
            1000.0,
            MagnetoElectricTensor::xy_only(1e-3).unwrap(),
            ProperRotation::identity(),
            2.0,
        )
        .unwrap();
        assert_eq!(polarization(&p, 1.0, 1.0), 2.0 + 1e-3);
    }

    #[test]
    fn polarization_uses_oriented_tensor() {
        let p = Particle::simple(1e-3, 1e-9, 1000.0).unwrap().rotated(&pi_about_x());
        assert_eq!(polarization(&p, 0.0, 1.0), -1e-3);
    }

    #[test]
    fn mass_examples() {
        let m = particle_mass(&Particle::simple(0.0, 1e-9, 1000.0).unwrap());
        assert_eq!(m.dim, Dimension::MASS);
        assert!(((m.value - 1e-24) / 1e-24).abs() < 1e-15);
        assert_eq!(Particle::simple(0.0, 1.0, 1000.0).unwrap().mass(), 1000.0);
        let small = Particle::simple(0.0, 0.5, 3.0).unwrap().mass();
        let big = Particle::simple(0.0, 1.0, 3.0).unwrap().mass();
        assert_eq!(big, 8.0 * small);
    }

    #[test]
    fn particle_invariants_enforced() {
        let t = MagnetoElectricTensor::xy_only(1e-3).unwrap();
        let id = ProperRotation::identity();
        assert!(Particle::new(0.0, 1.0, t, id, 1.0).is_err());
        assert!(Particle::new(1.0, -1.0, t, id, 1.0).is_err());
        assert!(Particle::new(1.0, 1.0, t, id, 0.5).is_err());
        assert!(MagnetoElectricTensor::xy_only(1.5).is_err());
        assert!(MagnetoElectricTensor::xy_only(f64::NAN).is_err());
    }

    #[test]
    fn particle_json_round_trip_and_keys() {
        let p = Particle::simple(1e-3, 1e-9, 1000.0)
            .unwrap()
            .rotated(&ProperRotation::from_axis_angle([0.0, 1.0, 1.0], 0.3).unwrap());
        let json = serde_json::to_value(&p).unwrap();
        for key in [
            "chi0",
            "kappa1",
            "kappa2",
            "kappa3",
            "size_a_m",
            "density_kg_m3",
            "epsilon",
            "orientation",
        ] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert_eq!(json["chi0"].as_array().unwrap().len(), 9);
        let back: Particle = serde_json::from_value(json).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn particle_json_rejects_bad_orientation() {
        let bad = r#"{"chi0":[0,1e-3,0,0,0,0,0,0,0],"size_a_m":1e-9,"density_kg_m3":1000,
                      "orientation":[1,0,0,0,1,0,0,0,-1]}"#;
        let err = serde_json::from_str::<Particle>(bad).unwrap_err();
        assert!(err.to_string().contains("improper rotation"));
    }

    fn rotation_strategy() -> impl Strategy<Value = ProperRotation> {
        (prop::array::uniform3(-1.0..1.0f64), -PI..PI)
            .prop_filter("non-degenerate axis", |(a, _)| {
                a.iter().map(|x| x * x).sum::<f64>() > 1e-6
            })
            .prop_map(|(axis, angle)| ProperRotation::from_axis_angle(axis, angle).unwrap())
    }

    fn tensor_strategy() -> impl Strategy<Value = MagnetoElectricTensor> {
        prop::array::uniform9(-1.0..1.0f64)
            .prop_map(|e| MagnetoElectricTensor::new(Matrix3::from_row_slice(&e), 0.0, 0.0, 0.0).unwrap())
    }

    proptest! {
        #[test]
        fn rotation_preserves_frobenius_norm(t in tensor_strategy(), r in rotation_strategy()) {
            let n0 = t.frobenius_norm();
            let n1 = rotate_tensor(&t, &r).frobenius_norm();
            prop_assert!((n1 - n0).abs() <= 1e-10 * n0.max(f64::MIN_POSITIVE));
        }

        #[test]
        fn rotations_compose(t in tensor_strategy(), r1 in rotation_strategy(), r2 in rotation_strategy()) {
            let seq = rotate_tensor(&rotate_tensor(&t, &r1), &r2);
            let composed = rotate_tensor(&t, &r2.after(&r1));
            prop_assert!((seq.chi0 - composed.chi0).amax() <= 1e-10);
        }

        #[test]
        fn composed_rotation_stays_proper(r1 in rotation_strategy(), r2 in rotation_strategy()) {
            let r = r2.after(&r1);
            prop_assert!(ProperRotation::new(*r.matrix()).is_ok());
        }

        #[test]
        fn double_pi_about_x_is_identity(t in tensor_strategy()) {
            let r = pi_about_x();
            prop_assert_eq!(rotate_tensor(&rotate_tensor(&t, &r), &r), t);
        }

        #[test]
        fn chi_effective_cross_term_is_kappa1(
            chi in -1e-3..1e-3f64, k1 in -5.0..5.0f64, k2 in -5.0..5.0f64, k3 in -5.0..5.0f64,
            e in -1.0..1.0f64, b in -1.0..1.0f64,
        ) {
            let mut t = MagnetoElectricTensor::xy_only(chi).unwrap();
            (t.kappa1, t.kappa2, t.kappa3) = (k1, k2, k3);
            let h = 0.5;
            let mixed = (chi_effective(&t, e + h, b + h) - chi_effective(&t, e + h, b)
                - chi_effective(&t, e, b + h) + chi_effective(&t, e, b)) / (h * h);
            prop_assert!((mixed - k1).abs() <= 1e-8 * k1.abs().max(1.0));
            // affine in E at fixed B
            let f = |x: f64| chi_effective(&t, x, b);
            let slope1 = f(e + h) - f(e);
            let slope2 = f(e + 2.0 * h) - f(e + h);
            prop_assert!((slope1 - slope2).abs() <= 1e-12);
        }

        #[test]
        fn polarization_linear_in_e_without_e_responses(
            chi in -1e-3..1e-3f64, k3 in -5.0..5.0f64, eps in 1.0..10.0f64,
            e in -1.0..1.0f64, b in -1.0..1.0f64, s in -3.0..3.0f64,
        ) {
            let mut t = MagnetoElectricTensor::xy_only(chi).unwrap();
            t.kappa3 = k3;
            let p = Particle::new(1e-9, 1000.0, t, ProperRotation::identity(), eps).unwrap();
            let p0 = polarization(&p, 0.0, b);
            let lhs = polarization(&p, s * e, b) - p0;
            let rhs = s * (polarization(&p, e, b) - p0);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
        }
    }
}
