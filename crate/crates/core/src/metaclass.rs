//! Normal forms of the metaclasses I–VII and the closed-form light cones of
//! the birefringent ones.

use nalgebra::{Matrix3, Matrix4, Matrix6};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::factor::{factor_quartic, product_residual, BirefringenceResult, BirefringenceTag};
use crate::fresnel::{multi_index_slot, tamm_rubilar, QuarticForm};
use crate::medium::MediumTensor;
use crate::quadric::{QuadricForm, Signature};
use crate::segre::Metaclass;

/// Tolerance for the equality constraints of the closed-form cones.
pub const CONDITION_TOL: f64 = 1e-9;
/// Relative tolerance of the implicit `D0²` relation.
pub const D0_RELATION_TOL: f64 = 1e-8;

/// Parameters of a normal form, as in `{"class":"I","alpha":[..],"beta":[..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaclassParams {
    pub class: Metaclass,
    pub alpha: Vec<f64>,
    #[serde(default)]
    pub beta: Vec<f64>,
}

impl MetaclassParams {
    pub fn new(class: Metaclass, alpha: &[f64], beta: &[f64]) -> Result<Self> {
        let p = Self { class, alpha: alpha.to_vec(), beta: beta.to_vec() };
        p.validate()?;
        Ok(p)
    }

    /// `(number of α, number of β)` for a class.
    pub fn arity(class: Metaclass) -> Result<(usize, usize)> {
        Ok(match class {
            Metaclass::I => (3, 3),
            Metaclass::II => (2, 2),
            Metaclass::III => (1, 1),
            Metaclass::IV => (4, 2),
            Metaclass::V => (3, 1),
            Metaclass::VI => (5, 1),
            Metaclass::VII => (6, 0),
            Metaclass::VIIIToXXIII => return Err(Error::InvalidParams("metaclasses VIII-XXIII have no normal form here".into())),
        })
    }

    pub fn validate(&self) -> Result<()> {
        let (na, nb) = Self::arity(self.class)?;
        if self.alpha.len() != na || self.beta.len() != nb {
            return Err(Error::InvalidParams(format!(
                "class {} takes {na} alpha and {nb} beta values, got {} and {}",
                self.class,
                self.alpha.len(),
                self.beta.len()
            )));
        }
        if let Some(v) = self.alpha.iter().chain(&self.beta).find(|v| !v.is_finite()) {
            return Err(Error::InvalidParams(format!("non-finite parameter {v}")));
        }
        if let Some((i, b)) = self.beta.iter().enumerate().find(|(_, b)| **b <= 0.0) {
            return Err(Error::InvalidParams(format!("beta{} = {b} must be positive", i + 1)));
        }
        Ok(())
    }

    /// Fixed generic parameters used for reference Segre types.
    pub fn reference(class: Metaclass) -> Self {
        let (alpha, beta): (&[f64], &[f64]) = match class {
            Metaclass::I => (&[0.3, -0.7, 1.1], &[0.9, 1.3, 0.6]),
            Metaclass::II => (&[0.4, -0.5], &[1.2, 0.7]),
            Metaclass::III => (&[0.35], &[1.15]),
            Metaclass::IV => (&[0.2, -0.6, 0.9, 1.7], &[0.8, 1.4]),
            Metaclass::V => (&[-0.3, 0.8, 1.9], &[0.75]),
            Metaclass::VI => (&[0.1, -0.9, 1.3, 2.1, 0.65], &[1.05]),
            Metaclass::VII | Metaclass::VIIIToXXIII => (&[0.2, -1.1, 0.7, 1.6, 0.45, -2.3], &[]),
        };
        Self { class: if class == Metaclass::VIIIToXXIII { Metaclass::VII } else { class }, alpha: alpha.to_vec(), beta: beta.to_vec() }
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let p: Self = serde_json::from_value(value.clone())?;
        p.validate()?;
        Ok(p)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("params serialize")
    }

    fn a(&self, i: usize) -> f64 {
        self.alpha[i - 1]
    }

    fn b(&self, i: usize) -> f64 {
        self.beta[i - 1]
    }
}

/// The normal-form matrix of a class.
pub fn construct_metaclass(params: &MetaclassParams) -> Result<MediumTensor> {
    params.validate()?;
    let p = params;
    let mut m = Matrix6::zeros();
    // a 2×2 block [[x, y], [z, w]] on rows/columns (r, s)
    let mut block = |r: usize, s: usize, x: f64, y: f64, z: f64, w: f64| {
        m[(r, r)] = x;
        m[(r, s)] = y;
        m[(s, r)] = z;
        m[(s, s)] = w;
    };
    match p.class {
        Metaclass::I => {
            for i in 0..3 {
                let (a, b) = (p.alpha[i], p.beta[i]);
                block(i, i + 3, a, -b, b, a);
            }
        }
        Metaclass::IV => {
            block(0, 3, p.a(1), -p.b(1), p.b(1), p.a(1));
            block(1, 4, p.a(2), -p.b(2), p.b(2), p.a(2));
            block(2, 5, p.a(3), p.a(4), p.a(4), p.a(3));
        }
        Metaclass::VI => {
            block(0, 3, p.a(1), -p.b(1), p.b(1), p.a(1));
            block(1, 4, p.a(2), p.a(4), p.a(4), p.a(2));
            block(2, 5, p.a(3), p.a(5), p.a(5), p.a(3));
        }
        Metaclass::VII => {
            for i in 0..3 {
                block(i, i + 3, p.alpha[i], p.alpha[i + 3], p.alpha[i + 3], p.alpha[i]);
            }
        }
        Metaclass::II | Metaclass::V => {
            let (a1, b1) = (p.a(1), p.b(1));
            m[(0, 0)] = a1;
            m[(0, 1)] = -b1;
            m[(1, 0)] = b1;
            m[(1, 1)] = a1;
            m[(3, 1)] = 1.0;
            m[(3, 3)] = a1;
            m[(3, 4)] = b1;
            m[(4, 0)] = 1.0;
            m[(4, 3)] = -b1;
            m[(4, 4)] = a1;
            let off = if p.class == Metaclass::II { (-p.b(2), p.b(2)) } else { (p.a(3), p.a(3)) };
            m[(2, 2)] = p.a(2);
            m[(2, 5)] = off.0;
            m[(5, 2)] = off.1;
            m[(5, 5)] = p.a(2);
        }
        Metaclass::III => {
            let (a1, b1) = (p.a(1), p.b(1));
            let rows = [
                [a1, -b1, 0.0, 0.0, 0.0, 0.0],
                [b1, a1, 0.0, 0.0, 0.0, 0.0],
                [1.0, 0.0, a1, 0.0, 0.0, -b1],
                [0.0, 0.0, 0.0, a1, b1, 1.0],
                [0.0, 0.0, 1.0, -b1, a1, 0.0],
                [0.0, 1.0, b1, 0.0, 0.0, a1],
            ];
            return Ok(MediumTensor::from_rows(rows));
        }
        Metaclass::VIIIToXXIII => unreachable!("rejected by validate"),
    }
    Ok(MediumTensor::from_matrix(m))
}

/// D-invariants with the class constant `c` normalizing the quartic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DInvariants {
    pub d0: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

/// Class constant `C` in `f = C·(normal polynomial)`; classes II and III
/// use `C = β1`, class V `C = β1·α3`.
pub fn class_constant(params: &MetaclassParams) -> Result<f64> {
    params.validate()?;
    let p = params;
    Ok(match p.class {
        Metaclass::I => p.b(1) * p.b(2) * p.b(3),
        Metaclass::IV => p.b(1) * p.b(2) * p.a(4),
        Metaclass::VI => p.b(1) * p.a(4) * p.a(5),
        Metaclass::VII => p.a(4) * p.a(5) * p.a(6),
        Metaclass::II | Metaclass::III => p.b(1),
        Metaclass::V => p.b(1) * p.a(3),
        Metaclass::VIIIToXXIII => unreachable!("rejected by validate"),
    })
}

fn d_class_i(p: &MetaclassParams, i: usize) -> f64 {
    let (j, k) = match i {
        1 => (2, 3),
        2 => (1, 3),
        _ => (1, 2),
    };
    ((p.a(j) - p.a(k)).powi(2) + p.b(j).powi(2) + p.b(k).powi(2)) / (p.b(j) * p.b(k))
}

/// `D0..D3` for classes I, IV, VI and VII. `D0` (and for class VI every
/// `Di`) is read off the computed quartic.
pub fn d_invariants(params: &MetaclassParams) -> Result<DInvariants> {
    params.validate()?;
    let p = params;
    let c = class_constant(p)?;
    if c == 0.0 {
        return Err(Error::InvalidParams(format!("class {} constant vanishes for these parameters", p.class)));
    }
    let f = tamm_rubilar(&construct_metaclass(p)?);
    let mono = |idx: [usize; 4]| f.monomials()[multi_index_slot(idx)] / c;
    let x0123 = mono([0, 1, 2, 3]);
    let out = match p.class {
        Metaclass::I => {
            let (d1, d2, d3) = (d_class_i(p, 1), d_class_i(p, 2), d_class_i(p, 3));
            let d = DInvariants { d0: -x0123, d1, d2, d3, c };
            check_relation(d.d0, 4.0 * (4.0 + d1 * d2 * d3 - d1 * d1 - d2 * d2 - d3 * d3), 4.0 * (4.0 + (d1 * d2 * d3).abs() + d1 * d1 + d2 * d2 + d3 * d3))?;
            d
        }
        Metaclass::IV => {
            let (a4, b1, b2) = (p.a(4), p.b(1), p.b(2));
            DInvariants {
                d0: x0123,
                d1: ((p.a(2) - p.a(3)).powi(2) + b2 * b2 - a4 * a4) / (b2 * a4),
                d2: ((p.a(1) - p.a(3)).powi(2) + b1 * b1 - a4 * a4) / (b1 * a4),
                d3: d_class_i(p, 3),
                c,
            }
        }
        Metaclass::VI => DInvariants {
            d0: x0123,
            d1: mono([2, 2, 3, 3]),
            d2: -mono([1, 1, 3, 3]),
            d3: -mono([1, 1, 2, 2]),
            c,
        },
        Metaclass::VII => {
            let a = |i| p.a(i);
            let d1 = ((a(2) - a(3)).powi(2) - a(5).powi(2) - a(6).powi(2)) / (a(5) * a(6));
            let d2 = ((a(1) - a(3)).powi(2) - a(4).powi(2) - a(6).powi(2)) / (a(4) * a(6));
            let d3 = ((a(1) - a(2)).powi(2) - a(4).powi(2) - a(5).powi(2)) / (a(4) * a(5));
            let d = DInvariants { d0: x0123, d1, d2, d3, c };
            check_relation(d.d0, 4.0 * (-4.0 + d1 * d2 * d3 + d1 * d1 + d2 * d2 + d3 * d3), 4.0 * (4.0 + (d1 * d2 * d3).abs() + d1 * d1 + d2 * d2 + d3 * d3))?;
            d
        }
        other => return Err(Error::InvalidParams(format!("no D-invariants for class {other}"))),
    };
    Ok(out)
}

fn check_relation(d0: f64, rhs: f64, scale: f64) -> Result<()> {
    let gap = (d0 * d0 - rhs).abs();
    if gap > D0_RELATION_TOL * scale.max(1.0) {
        return Err(Error::ConsistencyCheck(format!("D0^2 = {} but the implicit relation gives {rhs}", d0 * d0)));
    }
    Ok(())
}

/// The class-I normal polynomial `ξ0⁴+ξ1⁴+ξ2⁴+ξ3⁴ − D0 ξ0ξ1ξ2ξ3 + Σ Di (ξi'²ξi''² − ξ0²ξi²)`.
pub fn normal_polynomial_i(d: &DInvariants) -> QuarticForm {
    let mut mono = [0.0; 35];
    let mut set = |idx: [usize; 4], v: f64| mono[multi_index_slot(idx)] += v;
    for i in 0..4 {
        set([i, i, i, i], 1.0);
    }
    set([0, 1, 2, 3], -d.d0);
    for (i, di, j, k) in [(1, d.d1, 2, 3), (2, d.d2, 1, 3), (3, d.d3, 1, 2)] {
        set([j, j, k, k], di);
        set([0, 0, i, i], -di);
    }
    QuarticForm::from_monomials(&mono)
}

/// The class-IV normal polynomial.
pub fn normal_polynomial_iv(d: &DInvariants) -> QuarticForm {
    let mut mono = [0.0; 35];
    let mut set = |idx: [usize; 4], v: f64| mono[multi_index_slot(idx)] += v;
    set([0, 0, 0, 0], 1.0);
    set([1, 1, 1, 1], -1.0);
    set([2, 2, 2, 2], -1.0);
    set([3, 3, 3, 3], 1.0);
    set([0, 1, 2, 3], d.d0);
    set([2, 2, 3, 3], d.d1);
    set([0, 0, 1, 1], -d.d1);
    set([1, 1, 3, 3], d.d2);
    set([0, 0, 2, 2], -d.d2);
    set([1, 1, 2, 2], -d.d3);
    set([0, 0, 3, 3], -d.d3);
    QuarticForm::from_monomials(&mono)
}

/// The class-VI normal polynomial.
pub fn normal_polynomial_vi(d: &DInvariants) -> QuarticForm {
    let mut mono = [0.0; 35];
    let mut set = |idx: [usize; 4], v: f64| mono[multi_index_slot(idx)] += v;
    set([0, 0, 0, 0], 1.0);
    set([1, 1, 1, 1], 1.0);
    set([2, 2, 2, 2], -1.0);
    set([3, 3, 3, 3], -1.0);
    set([0, 1, 2, 3], d.d0);
    set([2, 2, 3, 3], d.d1);
    set([0, 0, 1, 1], -d.d1);
    set([1, 1, 3, 3], -d.d2);
    set([0, 0, 2, 2], -d.d2);
    set([1, 1, 2, 2], -d.d3);
    set([0, 0, 3, 3], -d.d3);
    QuarticForm::from_monomials(&mono)
}

/// The class-VII normal polynomial.
pub fn normal_polynomial_vii(d: &DInvariants) -> QuarticForm {
    let mut mono = [0.0; 35];
    let mut set = |idx: [usize; 4], v: f64| mono[multi_index_slot(idx)] += v;
    for i in 0..4 {
        set([i, i, i, i], 1.0);
    }
    set([0, 1, 2, 3], d.d0);
    for (i, di, j, k) in [(1, d.d1, 2, 3), (2, d.d2, 1, 3), (3, d.d3, 1, 2)] {
        set([j, j, k, k], -di);
        set([0, 0, i, i], -di);
    }
    QuarticForm::from_monomials(&mono)
}

/// The normal polynomial of a class with printed D-invariants, scaled by `C`.
pub fn class_quartic_display(params: &MetaclassParams) -> Result<QuarticForm> {
    let d = d_invariants(params)?;
    let poly = match params.class {
        Metaclass::I => normal_polynomial_i(&d),
        Metaclass::IV => normal_polynomial_iv(&d),
        Metaclass::VI => normal_polynomial_vi(&d),
        Metaclass::VII => normal_polynomial_vii(&d),
        other => return Err(Error::InvalidParams(format!("no normal polynomial for class {other}"))),
    };
    Ok(poly.scaled(d.c))
}

/// The unique `i` (1-based) with `Di = 2` and `Di' = Di''`, if exactly one exists.
pub fn birefringence_condition_i(params: &MetaclassParams) -> Result<Option<usize>> {
    if params.class != Metaclass::I {
        return Err(Error::InvalidParams(format!("expected class I, got {}", params.class)));
    }
    params.validate()?;
    let d = [d_class_i(params, 1), d_class_i(params, 2), d_class_i(params, 3)];
    let near = |x: f64, y: f64| (x - y).abs() <= CONDITION_TOL * x.abs().max(y.abs()).max(1.0);
    let hits: Vec<usize> = (0..3)
        .filter(|&i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            near(d[i], 2.0) && near(d[j], d[k])
        })
        .collect();
    Ok(if hits.len() == 1 { Some(hits[0] + 1) } else { None })
}

/// Quadric factors `A = g₊⁻¹`, `B = g₋⁻¹` and the constant `C` with
/// `f = C·(ξᵀAξ)(ξᵀBξ)` for the birefringent classes I, II and IV.
pub fn cones_closed_form(params: &MetaclassParams) -> Result<(QuadricForm, QuadricForm, f64)> {
    params.validate()?;
    let p = params;
    let near = |x: f64, y: f64| (x - y).abs() <= CONDITION_TOL * x.abs().max(y.abs()).max(1.0);
    let fail = |what: &str| Err(Error::PreconditionViolated(what.to_string()));
    match p.class {
        Metaclass::I => {
            if birefringence_condition_i(p)?.is_none() {
                return fail("class I needs D_i = 2 and D_i' = D_i'' for exactly one i");
            }
            let d = [d_class_i(p, 1), d_class_i(p, 2), d_class_i(p, 3)];
            let root = |di: f64, sign: f64| 0.5 * (-di + sign * (di * di - 4.0).max(0.0).sqrt());
            let a = QuadricForm::diagonal([1.0, root(d[0], 1.0), root(d[1], 1.0), root(d[2], 1.0)]);
            let b = QuadricForm::diagonal([1.0, root(d[0], -1.0), root(d[1], -1.0), root(d[2], -1.0)]);
            Ok((a, b, class_constant(p)?))
        }
        Metaclass::II => {
            if !near(p.a(1), p.a(2)) {
                return fail("class II needs alpha1 = alpha2");
            }
            if !near(p.b(1), p.b(2)) {
                return fail("class II needs beta1 = beta2");
            }
            let b1 = p.b(1);
            let display = |s: f64| Matrix4::new(s, 0.0, 0.0, b1, 0.0, -b1, 0.0, 0.0, 0.0, 0.0, -b1, 0.0, b1, 0.0, 0.0, 0.0);
            Ok((QuadricForm::new(display(1.0)), QuadricForm::new(display(-1.0)), b1))
        }
        Metaclass::IV => {
            if !near(p.a(1), p.a(2)) {
                return fail("class IV needs alpha1 = alpha2");
            }
            if !near(p.b(1), p.b(2)) {
                return fail("class IV needs beta1 = beta2");
            }
            if p.a(4) == 0.0 {
                return fail("class IV needs alpha4 != 0");
            }
            if near(p.a(3).powi(2), p.a(4).powi(2)) {
                return fail("class IV needs alpha3^2 != alpha4^2");
            }
            let d1 = ((p.a(2) - p.a(3)).powi(2) + p.b(2).powi(2) - p.a(4).powi(2)) / (p.b(2) * p.a(4));
            let s = (d1 * d1 + 4.0).sqrt();
            let (x, y) = (0.5 * (-d1 + s), 0.5 * (-d1 - s));
            Ok((QuadricForm::diagonal([1.0, x, x, -1.0]), QuadricForm::diagonal([1.0, y, y, -1.0]), class_constant(p)?))
        }
        other => fail(&format!("class {other} has no double light cone")),
    }
}

/// Outcome of the exclusion check for a class without double light cones.
#[derive(Debug, Clone, PartialEq)]
pub struct ExclusionReport {
    pub class: Metaclass,
    pub result: BirefringenceResult,
    /// For class VI: `(σ, signature of g₊⁻¹, signature of g₋⁻¹)`.
    pub candidate_signatures: Vec<(i8, Signature, Signature)>,
}

impl ExclusionReport {
    /// The factorizer did not find a double light cone and every candidate
    /// factor is non-Lorentz.
    pub fn excluded(&self) -> bool {
        self.result.tag() != BirefringenceTag::DoubleLightCone && self.candidate_signatures.iter().all(|(_, a, _)| !a.is_lorentz())
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "class": self.class.as_str(),
            "excluded": self.excluded(),
            "birefringence": self.result.to_json(),
            "candidates": self.candidate_signatures.iter().map(|(s, a, b)| serde_json::json!({
                "sigma": s, "g_plus": a.to_string(), "g_minus": b.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// The class-VI candidate factors `diag(1, −σ, ½(σD3 ± √(D3²+4)), ½(−D3 ∓ σ√(D3²+4)))`.
pub fn class_vi_candidates(d3: f64, sigma: f64) -> (QuadricForm, QuadricForm) {
    let s = (d3 * d3 + 4.0).sqrt();
    let make = |pm: f64| QuadricForm::diagonal([1.0, -sigma, 0.5 * (sigma * d3 + pm * s), 0.5 * (-d3 - pm * sigma * s)]);
    (make(1.0), make(-1.0))
}

pub fn exclusion_evidence(params: &MetaclassParams) -> Result<ExclusionReport> {
    params.validate()?;
    let p = params;
    let nonzero = |vals: &[usize]| -> Result<()> {
        match vals.iter().find(|&&i| p.a(i) == 0.0) {
            Some(i) => Err(Error::InvalidParams(format!("class {} needs alpha{i} != 0", p.class))),
            None => Ok(()),
        }
    };
    match p.class {
        Metaclass::III => {}
        Metaclass::V => nonzero(&[3])?,
        Metaclass::VI => nonzero(&[4, 5])?,
        Metaclass::VII => nonzero(&[4, 5, 6])?,
        other => return Err(Error::InvalidParams(format!("class {other} is not one of III, V, VI, VII"))),
    }
    let f = tamm_rubilar(&construct_metaclass(p)?);
    let result = factor_quartic(&f)?;
    let mut candidate_signatures = Vec::new();
    if p.class == Metaclass::VI {
        let d = d_invariants(p)?;
        for sigma in [1.0, -1.0] {
            let (a, b) = class_vi_candidates(d.d3, sigma);
            candidate_signatures.push((sigma as i8, a.signature(), b.signature()));
        }
    }
    Ok(ExclusionReport { class: p.class, result, candidate_signatures })
}

/// The class-II coordinate change `x̃ = L x` and the medium in the new
/// coordinates, for `α1 = α2`, `β1 = β2`.
pub fn transform_ii(alpha1: f64, beta1: f64) -> Result<(Matrix4<f64>, MediumTensor)> {
    if beta1.is_nan() || beta1 <= 0.0 || !beta1.is_finite() || !alpha1.is_finite() {
        return Err(Error::InvalidParams(format!("transform needs beta1 > 0, got {beta1}")));
    }
    let w = (1.0 + 4.0 * beta1 * beta1).sqrt();
    let l_inv = Matrix4::new(
        0.0,
        0.0,
        (1.0 - w) / (2.0 * beta1),
        (1.0 + w) / (2.0 * beta1),
        0.0,
        1.0,
        0.0,
        0.0,
        1.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        1.0,
        1.0,
    );
    let l = l_inv.try_inverse().ok_or(Error::SingularJacobian(0.0))?;
    let params = MetaclassParams::new(Metaclass::II, &[alpha1, alpha1], &[beta1, beta1])?;
    let kappa = construct_metaclass(&params)?.pullback(&l)?;
    Ok((l, kappa))
}

/// The closed-form transformed class-II matrix `α1·Id + (1/w)·N`.
pub fn transform_ii_display(alpha1: f64, beta1: f64) -> Matrix6<f64> {
    let b = beta1;
    let w = (1.0 + 4.0 * b * b).sqrt();
    let n = Matrix6::from_row_slice(&[
        0.0, 0.0, 0.0, b * b, 0.0, 0.0, //
        0.0, b, -b, 0.0, b * (w - 1.0), -b, //
        0.0, b, -b, 0.0, -b, -b * (1.0 + w), //
        -w * w, 0.0, 0.0, 0.0, 0.0, 0.0, //
        0.0, -b * (1.0 + w), b, 0.0, b, b, //
        0.0, b, b * (w - 1.0), 0.0, -b, -b,
    ]);
    Matrix6::identity() * alpha1 + n / w
}

/// Constitutive blocks in a 3+1 split with `x⁰` as time: `D = ε·E + me_db·B`
/// and `H = ν·B + me_he·E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreePlusOne {
    pub permittivity: Matrix3<f64>,
    pub inverse_permeability: Matrix3<f64>,
    pub me_db: Matrix3<f64>,
    pub me_he: Matrix3<f64>,
}

/// Reads the blocks `[[A, B], [C, D]]` of the 6×6 matrix with `F ↔ (−E, B)`
/// and `G ↔ (H, D)`: `ε = −C`, `ν = B`, `me_db = D`, `me_he = −A`.
pub fn three_plus_one_split(kappa: &MediumTensor) -> ThreePlusOne {
    let m = kappa.matrix();
    let a: Matrix3<f64> = m.fixed_view::<3, 3>(0, 0).into();
    let b: Matrix3<f64> = m.fixed_view::<3, 3>(0, 3).into();
    let c: Matrix3<f64> = m.fixed_view::<3, 3>(3, 0).into();
    let d: Matrix3<f64> = m.fixed_view::<3, 3>(3, 3).into();
    ThreePlusOne { permittivity: -c, inverse_permeability: b, me_db: d, me_he: -a }
}

/// Verifies a closed-form pair against the computed quartic.
pub fn closed_form_residual(params: &MetaclassParams) -> Result<f64> {
    let (a, b, c) = cones_closed_form(params)?;
    let f = tamm_rubilar(&construct_metaclass(params)?);
    Ok(product_residual(&f, a.matrix(), b.matrix(), c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::max_abs;
    use crate::fresnel::tamm_rubilar;

    fn params(class: Metaclass, a: &[f64], b: &[f64]) -> MetaclassParams {
        MetaclassParams::new(class, a, b).unwrap()
    }

    #[test]
    fn class_i_unit_is_minus_hodge() {
        let k = construct_metaclass(&params(Metaclass::I, &[0.0; 3], &[1.0; 3])).unwrap();
        let mut expected = Matrix6::zeros();
        for i in 0..3 {
            expected[(i, i + 3)] = -1.0;
            expected[(i + 3, i)] = 1.0;
        }
        assert_eq!(*k.matrix(), expected);
        assert!(k.is_skewon_free(1e-14));
    }

    #[test]
    fn all_normal_forms_are_skewon_free() {
        for class in Metaclass::NORMAL_FORMS {
            let k = construct_metaclass(&MetaclassParams::reference(class)).unwrap();
            assert!(k.is_skewon_free(1e-14), "class {class}");
        }
    }

    #[test]
    fn invalid_params_are_rejected() {
        assert!(matches!(MetaclassParams::new(Metaclass::I, &[0.0; 3], &[1.0, 0.0, 1.0]), Err(Error::InvalidParams(_))));
        assert!(matches!(MetaclassParams::new(Metaclass::II, &[0.0; 3], &[1.0, 1.0]), Err(Error::InvalidParams(_))));
        assert!(matches!(MetaclassParams::new(Metaclass::VIIIToXXIII, &[], &[]), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn d_invariant_examples() {
        let d = d_invariants(&params(Metaclass::I, &[0.0; 3], &[1.0; 3])).unwrap();
        assert_eq!((d.d1, d.d2, d.d3), (2.0, 2.0, 2.0));
        assert!(d.d0.abs() < 1e-14);
        let d = d_invariants(&params(Metaclass::I, &[0.0; 3], &[1.0, 1.0, 2.0])).unwrap();
        assert_eq!((d.d1, d.d2, d.d3), (2.5, 2.5, 2.0));
        let d = d_invariants(&params(Metaclass::IV, &[0.0, 0.0, 0.0, 2.0], &[1.0, 1.0])).unwrap();
        assert_eq!(d.d1, -1.5);
        assert!(d_invariants(&params(Metaclass::VII, &[0.1, 0.2, 0.3, 0.0, 1.0, 1.0], &[])).is_err());
    }

    #[test]
    fn quartics_match_normal_polynomials() {
        for class in [Metaclass::I, Metaclass::IV, Metaclass::VI, Metaclass::VII] {
            let p = MetaclassParams::reference(class);
            let f = tamm_rubilar(&construct_metaclass(&p).unwrap());
            let display = class_quartic_display(&p).unwrap();
            assert!(f.distance(&display) <= 1e-12 * f.norm(), "class {class}");
        }
    }

    #[test]
    fn birefringence_condition_examples() {
        assert_eq!(birefringence_condition_i(&params(Metaclass::I, &[0.0; 3], &[1.0, 1.0, 2.0])).unwrap(), Some(3));
        assert_eq!(birefringence_condition_i(&params(Metaclass::I, &[0.0; 3], &[1.0; 3])).unwrap(), None);
        assert_eq!(birefringence_condition_i(&params(Metaclass::I, &[5.0, 0.0, 0.0], &[1.0, 2.0, 3.0])).unwrap(), None);
    }

    #[test]
    fn closed_forms_factor_the_quartic() {
        let cases = [
            params(Metaclass::I, &[0.0; 3], &[1.0, 1.0, 2.0]),
            params(Metaclass::I, &[0.4, -0.3, -0.3], &[0.7, 1.6, 1.6]),
            params(Metaclass::II, &[0.0, 0.0], &[1.0, 1.0]),
            params(Metaclass::II, &[0.3, 0.3], &[0.45, 0.45]),
            params(Metaclass::IV, &[0.0, 0.0, 0.0, 2.0], &[1.0, 1.0]),
            params(Metaclass::IV, &[0.2, 0.2, -0.5, -0.7], &[1.3, 1.3]),
        ];
        for p in cases {
            let (a, b, _) = cones_closed_form(&p).unwrap();
            assert!(a.is_lorentz() && b.is_lorentz(), "{p:?}");
            assert!(closed_form_residual(&p).unwrap() < 1e-12, "{p:?}: {}", closed_form_residual(&p).unwrap());
        }
    }

    #[test]
    fn closed_form_class_i_example() {
        let (a, b, c) = cones_closed_form(&params(Metaclass::I, &[0.0; 3], &[1.0, 1.0, 2.0])).unwrap();
        assert_eq!(a.matrix().diagonal(), nalgebra::Vector4::new(1.0, -0.5, -0.5, -1.0));
        assert_eq!(b.matrix().diagonal(), nalgebra::Vector4::new(1.0, -2.0, -2.0, -1.0));
        assert_eq!(c, 2.0);
    }

    #[test]
    fn closed_form_class_iv_example() {
        let (a, b, c) = cones_closed_form(&params(Metaclass::IV, &[0.0, 0.0, 0.0, 2.0], &[1.0, 1.0])).unwrap();
        assert_eq!(a.matrix().diagonal(), nalgebra::Vector4::new(1.0, 2.0, 2.0, -1.0));
        assert_eq!(b.matrix().diagonal(), nalgebra::Vector4::new(1.0, -0.5, -0.5, -1.0));
        assert_eq!(a.signature(), Signature { positive: 3, negative: 1, zero: 0 });
        assert_eq!(b.signature(), Signature { positive: 1, negative: 3, zero: 0 });
        assert_eq!(c, 2.0);
    }

    #[test]
    fn closed_form_preconditions() {
        let err = cones_closed_form(&params(Metaclass::II, &[0.0, 0.1], &[1.0, 1.0])).unwrap_err();
        assert_eq!(err, Error::PreconditionViolated("class II needs alpha1 = alpha2".into()));
        let err = cones_closed_form(&params(Metaclass::IV, &[0.0, 0.0, 2.0, 2.0], &[1.0, 1.0])).unwrap_err();
        assert_eq!(err, Error::PreconditionViolated("class IV needs alpha3^2 != alpha4^2".into()));
        assert!(cones_closed_form(&params(Metaclass::I, &[0.0; 3], &[1.0; 3])).is_err());
        assert!(cones_closed_form(&MetaclassParams::reference(Metaclass::VI)).is_err());
    }

    #[test]
    fn transform_ii_matches_display() {
        for (a1, b1) in [(0.0, 0.5), (0.0, 1.0), (0.7, 2.3)] {
            let (_, k) = transform_ii(a1, b1).unwrap();
            let expected = transform_ii_display(a1, b1);
            assert!(max_abs(&(k.matrix() - expected)) <= 1e-12 * max_abs(&expected), "beta1 = {b1}");
        }
        let (_, k) = transform_ii(0.0, 0.5).unwrap();
        assert!((k.matrix()[(3, 0)] + 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn three_plus_one_examples() {
        let k = construct_metaclass(&params(Metaclass::IV, &[0.0, 0.0, 0.0, 2.0], &[0.5, 0.5])).unwrap();
        let s = three_plus_one_split(&k);
        assert_eq!(s.permittivity, -Matrix3::from_diagonal(&nalgebra::Vector3::new(0.5, 0.5, 2.0)));
        // B = −diag(β1, β1, −α4)⁻¹·H
        assert_eq!(s.inverse_permeability, -Matrix3::from_diagonal(&nalgebra::Vector3::new(0.5, 0.5, -2.0)));
        assert_eq!(s.me_db, Matrix3::zeros());

        let hodge = MediumTensor::hodge_star(&Matrix4::from_diagonal(&nalgebra::Vector4::new(-1.0, 1.0, 1.0, 1.0))).unwrap();
        let s = three_plus_one_split(&hodge);
        assert_eq!(s.permittivity, Matrix3::identity());
        assert_eq!(s.inverse_permeability, Matrix3::identity());
        assert_eq!(s.me_db + s.me_he, Matrix3::zeros());

        let s = three_plus_one_split(&MediumTensor::identity());
        assert_eq!(s.permittivity, Matrix3::zeros());
        assert_eq!(s.inverse_permeability, Matrix3::zeros());
        assert_eq!(s.me_db, Matrix3::identity());
    }

    #[test]
    fn json_round_trip() {
        let p = MetaclassParams::reference(Metaclass::IV);
        let v = p.to_json();
        assert_eq!(v["class"], "IV");
        assert_eq!(MetaclassParams::from_json(&v).unwrap(), p);
    }
}
