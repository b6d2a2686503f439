//! Model parameters, nondimensionalization and the internal-coordinate
//! quadratic forms of the three-particle harmonic molecule.
//!
//! Particles 1 and 2 are conventionally the nuclei and particle 3 the
//! electron. All quantities are dimensionless after [`nondimensionalize`];
//! energies are then in units of `hbar * sqrt(K / M)`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pairwise force constants `k12`, `k13`, `k23`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForceConstants {
    pub k12: f64,
    pub k13: f64,
    pub k23: f64,
}

impl ForceConstants {
    pub fn new(k12: f64, k13: f64, k23: f64) -> Self {
        Self { k12, k13, k23 }
    }

    /// `k12 (k13 + k23) + k13 k23`; positive iff the internal motion is bound.
    pub fn binding(&self) -> f64 {
        self.k12 * (self.k13 + self.k23) + self.k13 * self.k23
    }
}

/// Physical (dimensional) parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalParams {
    pub masses: [f64; 3],
    pub force_constants: ForceConstants,
    pub hbar: f64,
    pub reference_mass: f64,
    pub reference_force_constant: f64,
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        for (i, &m) in self.masses.iter().enumerate() {
            if !(m > 0.0) || !m.is_finite() {
                return Err(Error::validation(format!("masses[{i}]"), format!("must be positive, got {m}")));
            }
        }
        check_force_constants(&self.force_constants)?;
        for (name, v) in [
            ("hbar", self.hbar),
            ("reference_mass", self.reference_mass),
            ("reference_force_constant", self.reference_force_constant),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::validation(name, format!("must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

fn check_force_constants(k: &ForceConstants) -> Result<()> {
    for (name, v) in [("k12", k.k12), ("k13", k.k13), ("k23", k.k23)] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::validation(
                format!("force_constants.{name}"),
                format!("must be nonnegative, got {v}"),
            ));
        }
    }
    Ok(())
}

/// Dimensionless masses and force constants.
///
/// Construction through [`ModelParams::new`] (also used when deserializing)
/// enforces positive masses, nonnegative force constants and a bound
/// internal potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModelParams")]
pub struct ModelParams {
    masses: [f64; 3],
    #[serde(rename = "force_constants")]
    k: ForceConstants,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModelParams {
    masses: [f64; 3],
    force_constants: ForceConstants,
}

impl TryFrom<RawModelParams> for ModelParams {
    type Error = Error;

    fn try_from(raw: RawModelParams) -> Result<Self> {
        Self::new(raw.masses, raw.force_constants)
    }
}

impl ModelParams {
    pub fn new(masses: [f64; 3], k: ForceConstants) -> Result<Self> {
        for (i, &m) in masses.iter().enumerate() {
            if !(m > 0.0) || !m.is_finite() {
                return Err(Error::validation(format!("masses[{i}]"), format!("must be positive, got {m}")));
            }
        }
        check_force_constants(&k)?;
        if !(k.binding() > 0.0) {
            return Err(Error::validation(
                "force_constants",
                "internal potential is not bound: k12*(k13+k23) + k13*k23 must be positive",
            ));
        }
        Ok(Self { masses, k })
    }

    /// Shorthand for `new([m1, m2, m3], ForceConstants::new(k12, k13, k23))`.
    pub fn from_values(m1: f64, m2: f64, m3: f64, k12: f64, k13: f64, k23: f64) -> Result<Self> {
        Self::new([m1, m2, m3], ForceConstants::new(k12, k13, k23))
    }

    /// All masses and force constants equal to one.
    pub fn symmetric() -> Self {
        Self::from_values(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).expect("unit parameters are valid")
    }

    pub fn masses(&self) -> [f64; 3] {
        self.masses
    }
    pub fn m1(&self) -> f64 {
        self.masses[0]
    }
    pub fn m2(&self) -> f64 {
        self.masses[1]
    }
    pub fn m3(&self) -> f64 {
        self.masses[2]
    }
    pub fn force_constants(&self) -> ForceConstants {
        self.k
    }
    pub fn k12(&self) -> f64 {
        self.k.k12
    }
    pub fn k13(&self) -> f64 {
        self.k.k13
    }
    pub fn k23(&self) -> f64 {
        self.k.k23
    }

    /// Total mass `m1 + m2 + m3`.
    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// True when the nuclei are identical: `m1 == m2` and `k13 == k23`.
    pub fn is_homonuclear(&self) -> bool {
        self.masses[0] == self.masses[1] && self.k.k13 == self.k.k23
    }

    /// Full potential energy at particle positions `x`.
    pub fn potential(&self, x: [f64; 3]) -> f64 {
        let ForceConstants { k12, k13, k23 } = self.k;
        0.5 * (k12 * (x[0] - x[1]).powi(2) + k13 * (x[0] - x[2]).powi(2) + k23 * (x[1] - x[2]).powi(2))
    }

    /// Internal potential `(1/2)[k12 q2^2 + k13 q3^2 + k23 (q2 - q3)^2]`.
    pub fn internal_potential(&self, q2: f64, q3: f64) -> f64 {
        let ForceConstants { k12, k13, k23 } = self.k;
        0.5 * (k12 * q2 * q2 + k13 * q3 * q3 + k23 * (q2 - q3).powi(2))
    }
}

/// Convert physical parameters to dimensionless ones.
///
/// Returns the model parameters together with the energy unit
/// `hbar sqrt(K/M)` and the length unit `(hbar^2 / (M K))^(1/4)`.
pub fn nondimensionalize(p: &PhysicalParams) -> Result<(ModelParams, f64, f64)> {
    p.validate()?;
    let m = p.reference_mass;
    let kref = p.reference_force_constant;
    let masses = p.masses.map(|mi| mi / m);
    let k = ForceConstants::new(
        p.force_constants.k12 / kref,
        p.force_constants.k13 / kref,
        p.force_constants.k23 / kref,
    );
    let energy_unit = p.hbar * (kref / m).sqrt();
    // (hbar / sqrt(M K))^(1/2) avoids squaring hbar.
    let length_unit = (p.hbar / (m * kref).sqrt()).sqrt();
    Ok((ModelParams::new(masses, k)?, energy_unit, length_unit))
}

/// Center-of-mass coordinate `q1` and relative coordinates `q2 = x2 - x1`, `q3 = x3 - x1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InternalCoordinates {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub total_mass: f64,
}

pub fn to_internal(x1: f64, x2: f64, x3: f64, p: &ModelParams) -> InternalCoordinates {
    let [m1, m2, m3] = p.masses;
    let total_mass = m1 + m2 + m3;
    InternalCoordinates {
        q1: (m1 * x1 + m2 * x2 + m3 * x3) / total_mass,
        q2: x2 - x1,
        q3: x3 - x1,
        total_mass,
    }
}

/// Quadratic Hamiltonian `-1/2 sum A_ij d_i d_j + 1/2 sum B_ij q_i q_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearForm {
    /// Inverse-mass (kinetic) matrix.
    pub a: DMatrix<f64>,
    /// Force-constant (potential) matrix.
    pub b: DMatrix<f64>,
}

impl BilinearForm {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        if n == 0 || a.ncols() != n || b.nrows() != n || b.ncols() != n {
            return Err(Error::validation("bilinear form", "A and B must be square and of equal size"));
        }
        if a != a.transpose() || b != b.transpose() {
            return Err(Error::validation("bilinear form", "A and B must be symmetric"));
        }
        Ok(Self { a, b })
    }

    pub fn dimension(&self) -> usize {
        self.a.nrows()
    }
}

/// Kinetic and potential matrices of the internal Hamiltonian in `(q2, q3)`.
pub fn internal_bilinear_form(p: &ModelParams) -> BilinearForm {
    let [m1, m2, m3] = p.masses;
    let ForceConstants { k12, k13, k23 } = p.k;
    let a = DMatrix::from_row_slice(2, 2, &[1.0 / m1 + 1.0 / m2, 1.0 / m1, 1.0 / m1, 1.0 / m1 + 1.0 / m3]);
    let b = DMatrix::from_row_slice(2, 2, &[k12 + k23, -k23, -k23, k13 + k23]);
    BilinearForm { a, b }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn physical(masses: [f64; 3], k: f64, hbar: f64, mref: f64, kref: f64) -> PhysicalParams {
        PhysicalParams {
            masses,
            force_constants: ForceConstants::new(k, k, k),
            hbar,
            reference_mass: mref,
            reference_force_constant: kref,
        }
    }

    #[test]
    fn identity_scaling() {
        let (p, e, l) = nondimensionalize(&physical([1.0; 3], 1.0, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!(p.masses(), [1.0, 1.0, 1.0]);
        assert_eq!(p.force_constants(), ForceConstants::new(1.0, 1.0, 1.0));
        assert_eq!((e, l), (1.0, 1.0));
    }

    #[test]
    fn direct_ratio_scaling() {
        let (p, e, _) = nondimensionalize(&physical([2.0, 2.0, 1.0], 4.0, 1.0, 1.0, 4.0)).unwrap();
        assert_eq!(p.masses(), [2.0, 2.0, 1.0]);
        assert_eq!(p.force_constants(), ForceConstants::new(1.0, 1.0, 1.0));
        assert_eq!(e, 2.0);
    }

    #[test]
    fn electron_length_unit() {
        // (hbar^2/(M K))^(1/4) and hbar sqrt(K/M) evaluated at 40 digits.
        let (_, e, l) =
            nondimensionalize(&physical([1.0; 3], 1.0, 1.054571817e-34, 9.1093837015e-31, 1.0)).unwrap();
        assert_relative_eq!(l, 3.324036863826323342739e-10, max_relative = 1e-14);
        assert_relative_eq!(e, 1.104922107207633927373e-19, max_relative = 1e-14);
    }

    #[test]
    fn rejects_bad_physical_inputs() {
        let err = nondimensionalize(&physical([1.0, 0.0, 1.0], 1.0, 1.0, 1.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::Validation { ref field, .. } if field == "masses[1]"));
        let err = nondimensionalize(&physical([1.0; 3], 1.0, 1.0, -1.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::Validation { ref field, .. } if field == "reference_mass"));
    }

    #[test]
    fn model_validation() {
        assert!(ModelParams::from_values(1.0, 1.0, 0.0, 1.0, 1.0, 1.0).is_err());
        assert!(ModelParams::from_values(1.0, 1.0, 1.0, -1.0, 1.0, 1.0).is_err());
        // Only k13 nonzero: the nuclei are unbound.
        assert!(ModelParams::from_values(1.0, 1.0, 1.0, 0.0, 1.0, 0.0).is_err());
        // No nucleus-nucleus spring is fine.
        assert!(ModelParams::from_values(1.0, 1.0, 1.0, 0.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn internal_coordinates() {
        let p = ModelParams::symmetric();
        let q = to_internal(0.0, 0.0, 0.0, &p);
        assert_eq!((q.q1, q.q2, q.q3), (0.0, 0.0, 0.0));
        let q = to_internal(1.0, 1.0, 1.0, &p);
        assert_eq!((q.q1, q.q2, q.q3), (1.0, 0.0, 0.0));
        let q = to_internal(0.0, 1.0, 2.0, &p);
        assert_eq!((q.q1, q.q2, q.q3, q.total_mass), (1.0, 1.0, 2.0, 3.0));
    }

    #[test]
    fn bilinear_forms() {
        let f = internal_bilinear_form(&ModelParams::symmetric());
        assert_eq!(f.a, DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]));
        assert_eq!(f.b, DMatrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 2.0]));

        let f = internal_bilinear_form(&ModelParams::from_values(100.0, 100.0, 1.0, 1.0, 1.0, 1.0).unwrap());
        assert_relative_eq!(f.a[(0, 0)], 0.02);
        assert_relative_eq!(f.a[(0, 1)], 0.01);
        assert_relative_eq!(f.a[(1, 0)], 0.01);
        assert_relative_eq!(f.a[(1, 1)], 1.01);

        let f = internal_bilinear_form(&ModelParams::from_values(1.0, 2.0, 3.0, 1.0, 2.0, 0.0).unwrap());
        assert_eq!(f.b, DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]));
    }

    #[test]
    fn bilinear_form_reproduces_internal_potential() {
        let p = ModelParams::from_values(2.0, 1.0, 0.1, 1.0, 2.0, 3.0).unwrap();
        let f = internal_bilinear_form(&p);
        let (q2, q3) = (0.7, -1.3);
        let quad = 0.5 * (f.b[(0, 0)] * q2 * q2 + 2.0 * f.b[(0, 1)] * q2 * q3 + f.b[(1, 1)] * q3 * q3);
        assert_relative_eq!(quad, p.internal_potential(q2, q3), max_relative = 1e-14);
        assert_relative_eq!(p.internal_potential(q2, q3), p.potential([0.4, 0.4 + q2, 0.4 + q3]), max_relative = 1e-13);
    }

    fn params() -> impl Strategy<Value = ModelParams> {
        (0.05f64..50.0, 0.05f64..50.0, 0.05f64..50.0, 0.0f64..5.0, 0.01f64..5.0, 0.01f64..5.0)
            .prop_map(|(m1, m2, m3, k12, k13, k23)| ModelParams::from_values(m1, m2, m3, k12, k13, k23).unwrap())
    }

    proptest! {
        #[test]
        fn kinetic_matrix_is_positive_definite(p in params()) {
            let f = internal_bilinear_form(&p);
            let det = f.a[(0, 0)] * f.a[(1, 1)] - f.a[(0, 1)] * f.a[(1, 0)];
            prop_assert!(f.a.trace() > 0.0 && det > 0.0);
            let detb = f.b[(0, 0)] * f.b[(1, 1)] - f.b[(0, 1)] * f.b[(1, 0)];
            prop_assert!(f.b.trace() > 0.0 && detb > 0.0);
        }

        #[test]
        fn translation_moves_only_center_of_mass(p in params(), x in prop::array::uniform3(-5.0f64..5.0), a in -10.0f64..10.0) {
            let q = to_internal(x[0], x[1], x[2], &p);
            let s = to_internal(x[0] + a, x[1] + a, x[2] + a, &p);
            prop_assert!((s.q1 - q.q1 - a).abs() < 1e-12 * (1.0 + a.abs() + q.q1.abs()));
            prop_assert!((s.q2 - q.q2).abs() < 1e-12 * (1.0 + a.abs()));
            prop_assert!((s.q3 - q.q3).abs() < 1e-12 * (1.0 + a.abs()));
        }

        #[test]
        fn product_matches_closed_form_entries(p in params()) {
            // Closed-form entries of A*B, with the lower-right k13 term as
            // derived from the internal potential.
            let f = internal_bilinear_form(&p);
            let ab = &f.a * &f.b;
            let [m1, m2, m3] = p.masses();
            let (k12, k13, k23) = (p.k12(), p.k13(), p.k23());
            let expected = [
                (k12 * (m1 + m2) + k23 * m1) / (m1 * m2),
                (k13 * m2 - k23 * m1) / (m1 * m2),
                (k12 * m3 - k23 * m1) / (m1 * m3),
                (k13 * (m1 + m3) + k23 * m1) / (m1 * m3),
            ];
            let scale = ab.amax();
            for (i, e) in expected.iter().enumerate() {
                prop_assert!((ab[(i / 2, i % 2)] - e).abs() <= 1e-12 * scale, "entry {} {} vs {}", i, ab[(i / 2, i % 2)], e);
            }
        }
    }
}
