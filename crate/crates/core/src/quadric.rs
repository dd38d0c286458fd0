//! Quadratic forms on ℝ⁴ and their irreducibility tests.

use nalgebra::{Matrix3, Matrix4, SymmetricEigen, Vector4};
use serde::Serialize;

use crate::basis::max_abs;
use crate::error::{Error, Result};

/// Eigenvalues with `|λ| < SIGNATURE_TOL·max|λ|` count as zero.
pub const SIGNATURE_TOL: f64 = 1e-9;
/// `adj Q` is considered nonzero when `‖adj Q‖ > IRREDUCIBLE_TOL·‖Q‖³` (max-entry norms).
pub const IRREDUCIBLE_TOL: f64 = 1e-9;

/// Sylvester inertia `(n₊, n₋, n₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn is_lorentz(&self) -> bool {
        self.zero == 0 && ((self.positive, self.negative) == (1, 3) || (self.positive, self.negative) == (3, 1))
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.positive, self.negative, self.zero)
    }
}

/// A symmetric 4×4 matrix `Q` standing for the quadric `ξ ↦ ξᵀ Q ξ`, with its
/// signature computed once on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadricForm {
    q: Matrix4<f64>,
    signature: Signature,
}

impl QuadricForm {
    /// Symmetrizes `m` and computes its signature.
    pub fn new(m: Matrix4<f64>) -> Self {
        let q = (m + m.transpose()) * 0.5;
        let signature = signature(&q, SIGNATURE_TOL);
        Self { q, signature }
    }

    pub fn diagonal(d: [f64; 4]) -> Self {
        Self::new(Matrix4::from_diagonal(&Vector4::from(d)))
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.q
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn is_lorentz(&self) -> bool {
        self.signature.is_lorentz()
    }

    pub fn evaluate(&self, xi: &Vector4<f64>) -> f64 {
        (xi.transpose() * self.q * xi)[(0, 0)]
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::new(self.q * c)
    }

    pub fn norm(&self) -> f64 {
        max_abs(&self.q)
    }

    pub fn rows(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = self.q[(r, c)];
            }
        }
        out
    }

    /// The metric whose inverse is this quadric, when it exists.
    pub fn inverse_metric(&self) -> Option<Matrix4<f64>> {
        self.q.try_inverse()
    }
}

/// Inertia of a symmetric matrix with eigenvalues below `tol·max|λ|` treated as zero.
pub fn signature(q: &Matrix4<f64>, tol: f64) -> Signature {
    let eig = SymmetricEigen::new(*q).eigenvalues;
    let scale = eig.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let mut s = Signature { positive: 0, negative: 0, zero: 0 };
    for &l in eig.iter() {
        if scale == 0.0 || l.abs() < tol * scale {
            s.zero += 1;
        } else if l > 0.0 {
            s.positive += 1;
        } else {
            s.negative += 1;
        }
    }
    s
}

/// Transposed cofactor matrix; `Q·adj(Q) = det(Q)·Id`.
pub fn adjugate(q: &Matrix4<f64>) -> Matrix4<f64> {
    let minor = |skip_r: usize, skip_c: usize| {
        let rows: Vec<usize> = (0..4).filter(|&r| r != skip_r).collect();
        let cols: Vec<usize> = (0..4).filter(|&c| c != skip_c).collect();
        Matrix3::from_fn(|r, c| q[(rows[r], cols[c])]).determinant()
    };
    Matrix4::from_fn(|r, c| {
        let sign = if (r + c) % 2 == 0 { 1.0 } else { -1.0 };
        sign * minor(c, r)
    })
}

/// Whether `ξᵀQξ` is irreducible over ℂ, decided by `adj Q ≠ 0`.
pub fn quadric_irreducible(q: &Matrix4<f64>) -> Result<bool> {
    let scale = max_abs(q);
    if scale == 0.0 {
        return Err(Error::ZeroForm);
    }
    Ok(max_abs(&adjugate(q)) > IRREDUCIBLE_TOL * scale.powi(3))
}

/// Gaeta covariant of `f(x) = xᵀQx`:
/// `−½ det [[2f(ξ), Df_ξ(η), Df_ξ(ζ)], [·, 2f(η), Df_η(ζ)], [·, ·, 2f(ζ)]]`.
pub fn gaeta_covariant(q: &Matrix4<f64>, xi: &Vector4<f64>, eta: &Vector4<f64>, zeta: &Vector4<f64>) -> f64 {
    let f = |x: &Vector4<f64>| (x.transpose() * q * x)[(0, 0)];
    // directional derivative of f at a along b
    let df = |a: &Vector4<f64>, b: &Vector4<f64>| (a.transpose() * (q + q.transpose()) * b)[(0, 0)];
    let m = Matrix3::new(
        2.0 * f(xi),
        df(xi, eta),
        df(xi, zeta),
        df(xi, eta),
        2.0 * f(eta),
        df(eta, zeta),
        df(xi, zeta),
        df(eta, zeta),
        2.0 * f(zeta),
    );
    -0.5 * m.determinant()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minkowski() -> Matrix4<f64> {
        Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0))
    }

    fn e(i: usize) -> Vector4<f64> {
        Vector4::from_fn(|r, _| if r == i { 1.0 } else { 0.0 })
    }

    #[test]
    fn adjugate_examples() {
        let adj = adjugate(&minkowski());
        assert_eq!(adj, Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, -1.0)));
        let rank1 = e(0) * e(0).transpose();
        assert_eq!(adjugate(&rank1), Matrix4::zeros());
        let rank2 = Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, 0.0, 0.0));
        assert_eq!(adjugate(&rank2), Matrix4::zeros());
    }

    #[test]
    fn adjugate_identity() {
        let q = Matrix4::new(2.0, 0.5, -1.0, 0.3, 0.5, 1.0, 0.2, 0.0, -1.0, 0.2, -3.0, 0.7, 0.3, 0.0, 0.7, 0.4);
        let prod = q * adjugate(&q);
        assert!((prod - Matrix4::identity() * q.determinant()).norm() < 1e-12);
    }

    #[test]
    fn irreducibility_examples() {
        assert!(quadric_irreducible(&minkowski()).unwrap());
        assert!(!quadric_irreducible(&Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, 0.0, 0.0))).unwrap());
        let q = Matrix4::new(2.0, 0.5, -1.0, 0.3, 0.5, 1.0, 0.2, 0.0, -1.0, 0.2, -3.0, 0.7, 0.3, 0.0, 0.7, 0.4);
        assert!(quadric_irreducible(&q).unwrap());
        assert_eq!(quadric_irreducible(&Matrix4::zeros()), Err(Error::ZeroForm));
    }

    #[test]
    fn gaeta_examples() {
        let q = minkowski();
        let x = Vector4::new(0.3, 1.0, -2.0, 0.5);
        assert_eq!(gaeta_covariant(&q, &x, &x, &x), 0.0);
        let rank1 = Vector4::new(1.0, 2.0, 0.0, -1.0) * Vector4::new(1.0, 2.0, 0.0, -1.0).transpose();
        let (a, b, c) = (Vector4::new(0.1, 0.2, 0.3, 0.4), Vector4::new(-1.0, 0.0, 2.0, 1.0), Vector4::new(0.5, 0.5, -0.5, 3.0));
        assert!(gaeta_covariant(&rank1, &a, &b, &c).abs() < 1e-13);
        // Gram matrix of the Minkowski form on e0, e1, e2 is 2·diag(−1, 1, 1)
        assert_eq!(gaeta_covariant(&q, &e(0), &e(1), &e(2)), 4.0);
    }

    #[test]
    fn signatures() {
        assert!(QuadricForm::new(minkowski()).is_lorentz());
        assert!(QuadricForm::new(-minkowski()).is_lorentz());
        let s = QuadricForm::diagonal([1.0, -1.0, 0.0, 0.0]).signature();
        assert_eq!(s, Signature { positive: 1, negative: 1, zero: 2 });
        assert!(!QuadricForm::diagonal([1.0, 1.0, -1.0, -1.0]).is_lorentz());
        assert_eq!(QuadricForm::new(Matrix4::zeros()).signature().zero, 4);
    }
}
