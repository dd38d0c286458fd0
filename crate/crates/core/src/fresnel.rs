//! Tamm–Rubilar density and the Fresnel quartic.

use std::collections::BTreeMap;

use nalgebra::{Matrix4, Vector4};
use serde_json::Value;

use crate::basis::{levi_civita, PERMUTATIONS4};
use crate::error::{Error, Result};
use crate::medium::{invert_jacobian, MediumTensor};

/// Full 4-index tensor on ℝ⁴.
pub type Tensor4 = [[[[f64; 4]; 4]; 4]; 4];

const fn build_multi_indices() -> [[usize; 4]; 35] {
    let mut out = [[0usize; 4]; 35];
    let mut n = 0;
    let mut i = 0;
    while i < 4 {
        let mut j = i;
        while j < 4 {
            let mut k = j;
            while k < 4 {
                let mut l = k;
                while l < 4 {
                    out[n] = [i, j, k, l];
                    n += 1;
                    l += 1;
                }
                k += 1;
            }
            j += 1;
        }
        i += 1;
    }
    out
}

/// Sorted degree-4 multi-indices `i ≤ j ≤ k ≤ l`, lexicographic.
pub const MULTI_INDICES: [[usize; 4]; 35] = build_multi_indices();

/// Position of a (not necessarily sorted) multi-index in [`MULTI_INDICES`].
pub fn multi_index_slot(idx: [usize; 4]) -> usize {
    let mut s = idx;
    s.sort_unstable();
    MULTI_INDICES.iter().position(|m| *m == s).expect("indices are in 0..4")
}

/// Number of distinct orderings of a sorted multi-index (4!/∏ multiplicities!).
pub fn multinomial(idx: [usize; 4]) -> f64 {
    let mut counts = [0usize; 4];
    for i in idx {
        counts[i] += 1;
    }
    let fact = |n: usize| (1..=n).product::<usize>() as f64;
    24.0 / counts.iter().map(|&c| fact(c)).product::<f64>()
}

/// A fully symmetric quartic form `f(ξ) = G^{ijkl} ξ_i ξ_j ξ_k ξ_l`.
///
/// Only the 35 sorted components are stored; no multinomial factor is baked
/// in, so `coeff([0,1,2,3])` is the tensor entry `G^{0123}` and the monomial
/// `ξ0ξ1ξ2ξ3` carries `24·G^{0123}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticForm {
    coeffs: [f64; 35],
}

impl QuarticForm {
    pub fn zero() -> Self {
        Self { coeffs: [0.0; 35] }
    }

    pub fn from_coefficients(coeffs: [f64; 35]) -> Self {
        Self { coeffs }
    }

    /// Symmetrizes an arbitrary 4-index tensor (scaling 1/4!).
    pub fn from_tensor(t: &Tensor4) -> Self {
        let mut coeffs = [0.0; 35];
        for (slot, m) in MULTI_INDICES.iter().enumerate() {
            let mut acc = 0.0;
            for p in PERMUTATIONS4 {
                acc += t[m[p[0]]][m[p[1]]][m[p[2]]][m[p[3]]];
            }
            coeffs[slot] = acc / 24.0;
        }
        Self { coeffs }
    }

    /// Quartic from monomial coefficients (indexed like [`MULTI_INDICES`]).
    pub fn from_monomials(monomials: &[f64; 35]) -> Self {
        let mut coeffs = [0.0; 35];
        for (slot, m) in MULTI_INDICES.iter().enumerate() {
            coeffs[slot] = monomials[slot] / multinomial(*m);
        }
        Self { coeffs }
    }

    pub fn coefficients(&self) -> &[f64; 35] {
        &self.coeffs
    }

    pub fn coeff(&self, idx: [usize; 4]) -> f64 {
        self.coeffs[multi_index_slot(idx)]
    }

    /// Coefficients of the monomials `ξ^α`, i.e. tensor entries times multinomials.
    pub fn monomials(&self) -> [f64; 35] {
        let mut out = [0.0; 35];
        for (slot, m) in MULTI_INDICES.iter().enumerate() {
            out[slot] = self.coeffs[slot] * multinomial(*m);
        }
        out
    }

    pub fn to_tensor(&self) -> Tensor4 {
        let mut t = [[[[0.0; 4]; 4]; 4]; 4];
        for (i, a) in t.iter_mut().enumerate() {
            for (j, b) in a.iter_mut().enumerate() {
                for (k, c) in b.iter_mut().enumerate() {
                    for (l, v) in c.iter_mut().enumerate() {
                        *v = self.coeff([i, j, k, l]);
                    }
                }
            }
        }
        t
    }

    /// `max |coeff|`.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |a, c| a.max(c.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { coeffs: self.coeffs.map(|v| v * c) }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs;
        for (a, b) in coeffs.iter_mut().zip(other.coeffs.iter()) {
            *a += b;
        }
        Self { coeffs }
    }

    /// `max |self − other|` over coefficients.
    pub fn distance(&self, other: &Self) -> f64 {
        self.coeffs.iter().zip(other.coeffs.iter()).fold(0.0_f64, |a, (x, y)| a.max((x - y).abs()))
    }

    /// Evaluates `f(ξ)` with multinomial weights.
    pub fn evaluate(&self, xi: &Vector4<f64>) -> f64 {
        MULTI_INDICES
            .iter()
            .zip(self.coeffs.iter())
            .map(|(m, c)| c * multinomial(*m) * xi[m[0]] * xi[m[1]] * xi[m[2]] * xi[m[3]])
            .sum()
    }

    /// The quartic `η ↦ f(M η)`.
    pub fn substitute(&self, m: &Matrix4<f64>) -> Self {
        let mut t = self.to_tensor();
        // contract one slot at a time
        for slot in 0..4 {
            let mut next = [[[[0.0; 4]; 4]; 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    for k in 0..4 {
                        for l in 0..4 {
                            let idx = [i, j, k, l];
                            let mut acc = 0.0;
                            for a in 0..4 {
                                let mut src = idx;
                                src[slot] = a;
                                acc += t[src[0]][src[1]][src[2]][src[3]] * m[(a, idx[slot])];
                            }
                            next[i][j][k][l] = acc;
                        }
                    }
                }
            }
            t = next;
        }
        Self::from_tensor(&t)
    }

    /// Density transformation law under `x̃ = T x`:
    /// `G̃^{ijkl} = det(∂x/∂x̃) · G^{abcd} T^i_a T^j_b T^k_c T^l_d`.
    pub fn transform_density(&self, t: &Matrix4<f64>) -> Result<Self> {
        let tinv = invert_jacobian(t)?;
        Ok(self.substitute(&t.transpose()).scaled(tinv.determinant()))
    }

    /// Coefficients `c_n` of the binary quartic `f(s·u + t·v) = Σ c_n s^{4−n} t^n`.
    pub fn restrict_to_plane(&self, u: &Vector4<f64>, v: &Vector4<f64>) -> Result<[f64; 5]> {
        let (nu, nv) = (u.norm(), v.norm());
        if nu == 0.0 || nv == 0.0 {
            return Err(Error::DependentVectors);
        }
        // sine of the angle, via the component of v orthogonal to u
        let sine = (v - u * (u.dot(v) / (nu * nu))).norm() / nv;
        if sine < 1e-10 {
            return Err(Error::DependentVectors);
        }
        let t = self.to_tensor();
        let mut out = [0.0; 5];
        for (n, c) in out.iter_mut().enumerate() {
            // symmetric multilinear form with n copies of v and 4 − n of u
            let vecs: Vec<&Vector4<f64>> = (0..4).map(|p| if p < 4 - n { u } else { v }).collect();
            let mut acc = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    for k in 0..4 {
                        for l in 0..4 {
                            acc += t[i][j][k][l] * vecs[0][i] * vecs[1][j] * vecs[2][k] * vecs[3][l];
                        }
                    }
                }
            }
            let binom = [1.0, 4.0, 6.0, 4.0, 1.0][n];
            *c = binom * acc;
        }
        Ok(out)
    }

    /// `{"quartic": {"0001": c, ...}}`; zero coefficients are kept so the
    /// object always has 35 keys.
    pub fn to_json(&self) -> Value {
        let map: BTreeMap<String, f64> = MULTI_INDICES
            .iter()
            .zip(self.coeffs.iter())
            .map(|(m, c)| (m.iter().map(|d| char::from(b'0' + *d as u8)).collect(), *c))
            .collect();
        serde_json::json!({ "quartic": map })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let map = value
            .get("quartic")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Format("expected an object under `quartic`".into()))?;
        let mut coeffs = [0.0; 35];
        for (key, v) in map {
            let digits: Vec<usize> = key.chars().map(|ch| ch.to_digit(10).map(|d| d as usize)).collect::<Option<_>>().unwrap_or_default();
            if digits.len() != 4 || digits.iter().any(|&d| d > 3) || digits.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::Format(format!("invalid multi-index key `{key}`")));
            }
            let c = v.as_f64().ok_or_else(|| Error::Format(format!("coefficient `{key}` is not a number")))?;
            coeffs[multi_index_slot([digits[0], digits[1], digits[2], digits[3]])] = c;
        }
        Ok(Self { coeffs })
    }
}

/// Unsymmetrized contraction
/// `G0^{ijkl} = 1/48 κ^{a1a2}_{b1b2} κ^{a3i}_{b3b4} κ^{a4j}_{b5b6} ε^{b1b2b5k} ε^{b3b4b6l} ε_{a1a2a3a4}`.
///
/// Only the 24 nonzero orderings of each Levi-Civita symbol are visited.
pub fn tamm_rubilar_unsymmetrized(kappa: &MediumTensor) -> Tensor4 {
    let raw = kappa.to_components();
    let sign = |p: [usize; 4]| f64::from(levi_civita(p));
    let mut g = [[[[0.0; 4]; 4]; 4]; 4];
    for pa in PERMUTATIONS4 {
        let sa = sign(pa);
        let [a1, a2, a3, a4] = pa;
        for pb in PERMUTATIONS4 {
            let [b1, b2, b5, k] = pb;
            let first = raw[a1][a2][b1][b2];
            if first == 0.0 {
                continue;
            }
            let outer = sa * sign(pb) * first;
            for pc in PERMUTATIONS4 {
                let [b3, b4, b6, l] = pc;
                let w = outer * sign(pc);
                for i in 0..4 {
                    let second = raw[a3][i][b3][b4];
                    if second == 0.0 {
                        continue;
                    }
                    for j in 0..4 {
                        g[i][j][k][l] += w * second * raw[a4][j][b5][b6];
                    }
                }
            }
        }
    }
    for a in g.iter_mut() {
        for b in a.iter_mut() {
            for c in b.iter_mut() {
                for v in c.iter_mut() {
                    *v /= 48.0;
                }
            }
        }
    }
    g
}

/// The Tamm–Rubilar density `G^{ijkl} = G0^{(ijkl)}` of a medium.
pub fn tamm_rubilar(kappa: &MediumTensor) -> QuarticForm {
    QuarticForm::from_tensor(&tamm_rubilar_unsymmetrized(kappa))
}
