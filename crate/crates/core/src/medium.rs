//! Medium tensors: antisymmetric (2,2)-tensors stored as 6×6 matrices in basis `O`.

use nalgebra::{Matrix4, Matrix6};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::basis::{levi_civita, max_abs, pair_slot, second_compound, wedge_pairing, RawComponents, PAIRS};
use crate::error::{Error, Result};

/// Relative tolerance for antisymmetry of raw component input.
pub const ANTISYMMETRY_TOL: f64 = 1e-12;
/// Relative determinant threshold below which a metric or Jacobian is singular.
pub const SINGULAR_TOL: f64 = 1e-12;

/// A medium tensor `κ` at a point.
///
/// `mat[(b(I), b(J))] = κ^{J1 J2}_{I1 I2}`; column `J` holds the image of `dx^J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumTensor {
    mat: Matrix6<f64>,
}

/// Principal, skewon and axion parts of a medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    pub principal: MediumTensor,
    pub skewon: MediumTensor,
    pub axion: f64,
}

impl MediumTensor {
    pub fn from_matrix(mat: Matrix6<f64>) -> Self {
        Self { mat }
    }

    pub fn from_rows(rows: [[f64; 6]; 6]) -> Self {
        Self { mat: Matrix6::from_fn(|r, c| rows[r][c]) }
    }

    pub fn zero() -> Self {
        Self { mat: Matrix6::zeros() }
    }

    pub fn identity() -> Self {
        Self { mat: Matrix6::identity() }
    }

    pub fn matrix(&self) -> &Matrix6<f64> {
        &self.mat
    }

    pub fn rows(&self) -> [[f64; 6]; 6] {
        let mut out = [[0.0; 6]; 6];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = self.mat[(r, c)];
            }
        }
        out
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { mat: self.mat * c }
    }

    /// Ingests raw components, rejecting antisymmetry violations above
    /// [`ANTISYMMETRY_TOL`] (relative to the Frobenius norm of `raw`).
    pub fn from_components(raw: &RawComponents) -> Result<Self> {
        Self::from_components_with_correction(raw).map(|(m, _)| m)
    }

    /// Like [`from_components`](Self::from_components), additionally
    /// returning the Frobenius norm of the correction applied when projecting
    /// `raw` onto the antisymmetric subspace.
    pub fn from_components_with_correction(raw: &RawComponents) -> Result<(Self, f64)> {
        let mut mat = Matrix6::zeros();
        for (r, &(i1, i2)) in PAIRS.iter().enumerate() {
            for (c, &(j1, j2)) in PAIRS.iter().enumerate() {
                // average of the four signed slots; grouped so exact input round-trips exactly
                let a = raw[j1][j2][i1][i2] - raw[j2][j1][i1][i2];
                let b = raw[j2][j1][i2][i1] - raw[j1][j2][i2][i1];
                mat[(r, c)] = (a + b) / 4.0;
            }
        }
        let medium = Self { mat };
        let projected = medium.to_components();
        let mut scale = 0.0;
        let mut violation = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                for l in 0..4 {
                    for m in 0..4 {
                        scale += raw[i][j][l][m] * raw[i][j][l][m];
                        let d = raw[i][j][l][m] - projected[i][j][l][m];
                        violation += d * d;
                    }
                }
            }
        }
        let (scale, violation) = (scale.sqrt(), violation.sqrt());
        let tolerance = ANTISYMMETRY_TOL * scale;
        if violation > tolerance {
            return Err(Error::AntisymmetryViolation { violation, tolerance });
        }
        Ok((medium, violation))
    }

    /// Raw components `κ^{ij}_{lm}`.
    pub fn to_components(&self) -> RawComponents {
        let mut raw = [[[[0.0; 4]; 4]; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let Some((col, s_up)) = pair_slot(i, j) else { continue };
                for l in 0..4 {
                    for m in 0..4 {
                        let Some((row, s_down)) = pair_slot(l, m) else { continue };
                        raw[i][j][l][m] = s_up * s_down * self.mat[(row, col)];
                    }
                }
            }
        }
        raw
    }

    /// `κ(u) ∧ v = u ∧ κ(v)` for all two-forms, i.e. `J6·mat` is symmetric,
    /// tested as `‖J6·mat − (J6·mat)ᵀ‖ ≤ tol·‖mat‖` in the Frobenius norm.
    pub fn is_skewon_free(&self, tol: f64) -> bool {
        let jm = wedge_pairing() * self.mat;
        (jm - jm.transpose()).norm() <= tol * self.mat.norm()
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace()
    }

    pub fn determinant(&self) -> f64 {
        self.mat.determinant()
    }

    /// Splits `κ = principal + skewon + axion·Id` with the axion part carrying
    /// the trace and the skewon part antisymmetric under the wedge pairing.
    pub fn decompose(&self) -> Decomposition {
        let axion = self.mat.trace() / 6.0;
        let traceless = self.mat - Matrix6::identity() * axion;
        let j6 = wedge_pairing();
        let jm = j6 * traceless;
        let sym = (jm + jm.transpose()) * 0.5;
        let anti = (jm - jm.transpose()) * 0.5;
        Decomposition {
            principal: Self { mat: j6 * sym },
            skewon: Self { mat: j6 * anti },
            axion,
        }
    }

    /// Medium induced by the Hodge star of `g`:
    /// `κ^{ij}_{rs} = √|det g| g^{ia} g^{jb} ε_{abrs}`.
    pub fn hodge_star(g: &Matrix4<f64>) -> Result<Self> {
        let g = (g + g.transpose()) * 0.5;
        let det = g.determinant();
        if det.abs() <= SINGULAR_TOL * max_abs(&g).powi(4) || det == 0.0 {
            return Err(Error::DegenerateMetric(det.abs()));
        }
        let ginv = g.try_inverse().ok_or(Error::DegenerateMetric(det.abs()))?;
        let vol = det.abs().sqrt();
        let mut raw = [[[[0.0; 4]; 4]; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for r in 0..4 {
                    for s in 0..4 {
                        let mut acc = 0.0;
                        for a in 0..4 {
                            for b in 0..4 {
                                let eps = levi_civita([a, b, r, s]);
                                if eps != 0 {
                                    acc += ginv[(i, a)] * ginv[(j, b)] * f64::from(eps);
                                }
                            }
                        }
                        raw[i][j][r][s] = vol * acc;
                    }
                }
            }
        }
        Self::from_components(&raw)
    }

    /// Components of `κ` in new coordinates `x̃ = T x`: two factors of `T` on
    /// the upper indices and two of `T⁻¹` on the lower ones. On the 6×6 matrix
    /// this is conjugation by the second compound of `T`.
    ///
    /// `κ.pullback(S).pullback(T) == κ.pullback(T·S)`.
    pub fn pullback(&self, t: &Matrix4<f64>) -> Result<Self> {
        let tinv = invert_jacobian(t)?;
        let lower = second_compound(&tinv).transpose();
        let upper = second_compound(t).transpose();
        Ok(Self { mat: lower * self.mat * upper })
    }

    /// Serializes to the medium JSON format with an explicit 6×6 matrix.
    pub fn to_json(&self) -> Value {
        serde_json::to_value(MediumJson::Matrix { basis: BASIS_NAME.to_string(), matrix: self.rows() })
            .expect("medium serializes")
    }

    /// Parses the medium JSON format: either
    /// `{"basis": "O-standard", "matrix": [[..6×6..]]}` or
    /// `{"components": [4][4][4][4]}`.
    pub fn from_json(value: &Value) -> Result<Self> {
        let parsed: MediumJson = serde_json::from_value(value.clone())?;
        match parsed {
            MediumJson::Matrix { basis, matrix } => {
                if basis != BASIS_NAME {
                    return Err(Error::Format(format!("unknown basis `{basis}`, expected `{BASIS_NAME}`")));
                }
                Ok(Self::from_rows(matrix))
            }
            MediumJson::Components { components } => Self::from_components(&components),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(s)?)
    }
}

pub(crate) fn invert_jacobian(t: &Matrix4<f64>) -> Result<Matrix4<f64>> {
    let det = t.determinant();
    if det.abs() <= SINGULAR_TOL * max_abs(t).powi(4) || det == 0.0 {
        return Err(Error::SingularJacobian(det.abs()));
    }
    t.try_inverse().ok_or(Error::SingularJacobian(det.abs()))
}

pub const BASIS_NAME: &str = "O-standard";

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
#[allow(clippy::large_enum_variant)]
enum MediumJson {
    Matrix { basis: String, matrix: [[f64; 6]; 6] },
    Components { components: RawComponents },
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minkowski() -> Matrix4<f64> {
        Matrix4::from_diagonal(&nalgebra::Vector4::new(-1.0, 1.0, 1.0, 1.0))
    }

    fn minkowski_hodge_matrix() -> Matrix6<f64> {
        let mut m = Matrix6::zeros();
        for k in 0..3 {
            m[(k, k + 3)] = 1.0;
            m[(k + 3, k)] = -1.0;
        }
        m
    }

    /// Direct evaluation of the Hodge formula with explicit loops over every index.
    fn hodge_components_oracle(g: &Matrix4<f64>) -> RawComponents {
        let ginv = g.try_inverse().unwrap();
        let vol = g.determinant().abs().sqrt();
        let mut raw = [[[[0.0; 4]; 4]; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for r in 0..4 {
                    for s in 0..4 {
                        for a in 0..4 {
                            for b in 0..4 {
                                raw[i][j][r][s] += vol * ginv[(i, a)] * ginv[(j, b)] * f64::from(levi_civita([a, b, r, s]));
                            }
                        }
                    }
                }
            }
        }
        raw
    }

    /// Raw-component transformation rule for a (2,2)-tensor.
    fn pullback_oracle(raw: &RawComponents, t: &Matrix4<f64>) -> RawComponents {
        let s = t.try_inverse().unwrap();
        let mut out = [[[[0.0; 4]; 4]; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for l in 0..4 {
                    for m in 0..4 {
                        let mut acc = 0.0;
                        for a in 0..4 {
                            for b in 0..4 {
                                for c in 0..4 {
                                    for d in 0..4 {
                                        acc += t[(i, a)] * t[(j, b)] * raw[a][b][c][d] * s[(c, l)] * s[(d, m)];
                                    }
                                }
                            }
                        }
                        out[i][j][l][m] = acc;
                    }
                }
            }
        }
        out
    }

    #[test]
    fn zero_components_give_zero_matrix() {
        let m = MediumTensor::from_components(&[[[[0.0; 4]; 4]; 4]; 4]).unwrap();
        assert_eq!(*m.matrix(), Matrix6::zeros());
    }

    #[test]
    fn single_antisymmetric_slot() {
        let mut raw = [[[[0.0; 4]; 4]; 4]; 4];
        raw[0][1][0][1] = 1.0;
        raw[1][0][0][1] = -1.0;
        raw[0][1][1][0] = -1.0;
        raw[1][0][1][0] = 1.0;
        let m = MediumTensor::from_components(&raw).unwrap();
        let mut expected = Matrix6::zeros();
        expected[(0, 0)] = 1.0;
        assert_eq!(*m.matrix(), expected);
    }

    #[test]
    fn minkowski_hodge_from_components() {
        let raw = hodge_components_oracle(&minkowski());
        let m = MediumTensor::from_components(&raw).unwrap();
        assert_eq!(*m.matrix(), minkowski_hodge_matrix());
    }

    #[test]
    fn antisymmetry_violation_is_rejected() {
        let mut raw = [[[[0.0; 4]; 4]; 4]; 4];
        raw[0][1][2][3] = 1.0;
        assert!(matches!(MediumTensor::from_components(&raw), Err(Error::AntisymmetryViolation { .. })));
    }

    #[test]
    fn tiny_violation_is_symmetrized_and_reported() {
        let mut raw = MediumTensor::from_matrix(minkowski_hodge_matrix()).to_components();
        raw[0][1][2][3] += 1e-15;
        let (m, correction) = MediumTensor::from_components_with_correction(&raw).unwrap();
        assert!(correction > 0.0 && correction < 1e-14);
        assert!((m.matrix() - minkowski_hodge_matrix()).norm() < 1e-15);
    }

    #[test]
    fn skewon_free_examples() {
        assert!(MediumTensor::from_matrix(minkowski_hodge_matrix()).is_skewon_free(1e-12));
        let mut m = Matrix6::zeros();
        m[(0, 1)] = 1.0;
        assert!(!MediumTensor::from_matrix(m).is_skewon_free(1e-12));
        // an isolated (I, I+3) entry lands on the diagonal of J6·mat
        let mut m = Matrix6::zeros();
        m[(0, 3)] = 1.0;
        assert!(MediumTensor::from_matrix(m).is_skewon_free(1e-12));
    }

    #[test]
    fn decomposition_examples() {
        let id = MediumTensor::identity().decompose();
        assert_eq!(id.axion, 1.0);
        assert_eq!(*id.principal.matrix(), Matrix6::zeros());
        assert_eq!(*id.skewon.matrix(), Matrix6::zeros());

        let hodge = MediumTensor::from_matrix(minkowski_hodge_matrix());
        let d = hodge.decompose();
        assert_eq!(d.axion, 0.0);
        assert_eq!(d.principal, hodge);
        assert_eq!(*d.skewon.matrix(), Matrix6::zeros());

        let shifted = MediumTensor::from_matrix(minkowski_hodge_matrix() + Matrix6::identity() * 2.0).decompose();
        assert!((shifted.axion - 2.0).abs() < 1e-15);
        assert!((shifted.principal.matrix() - minkowski_hodge_matrix()).norm() < 1e-15);
    }

    #[test]
    fn decomposition_parts_have_required_symmetry() {
        let m = MediumTensor::from_matrix(Matrix6::from_fn(|r, c| ((r * 7 + c * 3) % 5) as f64 - 1.5 + (r as f64) * 0.1));
        let d = m.decompose();
        let j6 = wedge_pairing();
        let jp = j6 * d.principal.matrix();
        let js = j6 * d.skewon.matrix();
        assert!((jp - jp.transpose()).norm() < 1e-14);
        assert!((js + js.transpose()).norm() < 1e-14);
        assert!(d.principal.trace().abs() < 1e-14);
        let rebuilt = d.principal.matrix() + d.skewon.matrix() + Matrix6::identity() * d.axion;
        assert!((rebuilt - m.matrix()).norm() <= 1e-14 * m.matrix().norm());
    }

    #[test]
    fn hodge_star_of_minkowski() {
        let k = MediumTensor::hodge_star(&minkowski()).unwrap();
        assert_eq!(*k.matrix(), minkowski_hodge_matrix());
        assert!((k.matrix() * k.matrix() + Matrix6::identity()).norm() < 1e-14);
        assert!(k.is_skewon_free(1e-12));
        assert_eq!(k.trace(), 0.0);
    }

    #[test]
    fn hodge_star_of_euclidean_is_involution() {
        let k = MediumTensor::hodge_star(&Matrix4::identity()).unwrap();
        assert!((k.matrix() * k.matrix() - Matrix6::identity()).norm() < 1e-14);
    }

    #[test]
    fn hodge_star_is_conformally_invariant() {
        let a = MediumTensor::hodge_star(&minkowski()).unwrap();
        let b = MediumTensor::hodge_star(&(minkowski() * 4.0)).unwrap();
        assert!((a.matrix() - b.matrix()).norm() < 1e-14);
        let g = Matrix4::new(-2.0, 0.3, 0.1, 0.0, 0.3, 1.5, 0.2, 0.1, 0.1, 0.2, 1.0, -0.4, 0.0, 0.1, -0.4, 3.0);
        let oracle = MediumTensor::from_components(&hodge_components_oracle(&g)).unwrap();
        let k = MediumTensor::hodge_star(&g).unwrap();
        assert!((oracle.matrix() - k.matrix()).norm() < 1e-13);
    }

    #[test]
    fn degenerate_metric_is_rejected() {
        let g = Matrix4::from_diagonal(&nalgebra::Vector4::new(-1.0, 1.0, 1.0, 0.0));
        assert!(matches!(MediumTensor::hodge_star(&g), Err(Error::DegenerateMetric(_))));
    }

    #[test]
    fn pullback_by_identity_and_scalings() {
        let k = MediumTensor::from_matrix(Matrix6::from_fn(|r, c| (r as f64 + 1.0) * 0.3 - c as f64 * 0.7));
        assert_eq!(k.pullback(&Matrix4::identity()).unwrap(), k);
        let scaled = k.pullback(&(Matrix4::identity() * 3.7)).unwrap();
        assert!((scaled.matrix() - k.matrix()).norm() < 1e-13);
        let oracle = MediumTensor::from_components(&pullback_oracle(&k.to_components(), &(Matrix4::identity() * 3.7))).unwrap();
        assert!((oracle.matrix() - k.matrix()).norm() < 1e-13);
    }

    #[test]
    fn pullback_matches_component_rule() {
        let k = MediumTensor::from_matrix(Matrix6::from_fn(|r, c| ((r * 5 + c * 11) % 7) as f64 - 3.0));
        let t = Matrix4::new(1.0, 0.2, -0.5, 0.0, 0.3, 2.0, 0.1, 0.4, 0.0, -0.7, 1.5, 0.2, 0.6, 0.0, 0.3, 1.0);
        let expected = MediumTensor::from_components(&pullback_oracle(&k.to_components(), &t)).unwrap();
        let got = k.pullback(&t).unwrap();
        assert!((expected.matrix() - got.matrix()).norm() < 1e-12 * expected.matrix().norm());
    }

    #[test]
    fn hodge_is_natural_under_lorentz_boost() {
        let (ch, sh) = (0.8_f64.cosh(), 0.8_f64.sinh());
        let boost = Matrix4::new(ch, sh, 0.0, 0.0, sh, ch, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
        let k = MediumTensor::hodge_star(&minkowski()).unwrap();
        let oracle = MediumTensor::from_components(&pullback_oracle(&k.to_components(), &boost)).unwrap();
        assert!((oracle.matrix() - k.matrix()).norm() < 1e-12);
        assert!((k.pullback(&boost).unwrap().matrix() - k.matrix()).norm() < 1e-12);
    }

    #[test]
    fn singular_jacobian_is_rejected() {
        let mut t = Matrix4::identity();
        t[(3, 3)] = 0.0;
        assert!(matches!(MediumTensor::identity().pullback(&t), Err(Error::SingularJacobian(_))));
    }

    #[test]
    fn json_formats() {
        let k = MediumTensor::from_matrix(minkowski_hodge_matrix());
        let back = MediumTensor::from_json(&k.to_json()).unwrap();
        assert_eq!(back, k);
        let comps = serde_json::json!({ "components": k.to_components() });
        assert_eq!(MediumTensor::from_json(&comps).unwrap(), k);
        let bad = serde_json::json!({ "basis": "lexicographic", "matrix": k.rows() });
        assert!(matches!(MediumTensor::from_json(&bad), Err(Error::Format(_))));
    }
}
