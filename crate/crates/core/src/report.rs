//! The full analysis pipeline behind `birelab analyze`.

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::factor::{canonical_pair, factor_quartic, BirefringenceResult};
use crate::fresnel::{tamm_rubilar, QuarticForm};
use crate::medium::{MediumTensor, SINGULAR_TOL};
use crate::metaclass::{cones_closed_form, d_invariants, DInvariants, MetaclassParams};
use crate::segre::{metaclass_of_type, segre_type_with, SegreOptions, SKEWON_TOL};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub skewon_free: bool,
    pub axion: f64,
    pub determinant: f64,
    pub segre_label: String,
    pub metaclass: String,
    /// Symmetric coefficients keyed by sorted multi-index.
    pub quartic: Value,
    pub birefringence: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<MetaclassParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_invariants: Option<DInvariants>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<Value>,
    pub residuals: Residuals,
}

#[derive(Debug, Clone, Serialize)]
pub struct Residuals {
    /// Relative Frobenius error of principal + skewon + axion·Id.
    pub decomposition: f64,
    /// Grid residual of the reported factorization, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factorization: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<f64>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs every stage on a medium. Fails only when the Segre classification
/// refuses an ill-conditioned matrix.
pub fn analyze(kappa: &MediumTensor, opts: &SegreOptions) -> Result<AnalysisReport> {
    let m = kappa.matrix();
    let dec = kappa.decompose();
    let rebuilt = dec.principal.matrix() + dec.skewon.matrix() + nalgebra::Matrix6::identity() * dec.axion;
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let decomposition = (rebuilt - m).norm() / scale;

    let skewon_free = kappa.is_skewon_free(SKEWON_TOL);
    let segre = segre_type_with(m, opts)?;
    let sv = m.singular_values();
    let singular = sv.max() == 0.0 || sv.min() < SINGULAR_TOL * sv.max();
    let metaclass = if !skewon_free {
        "not classified (skewon part)".to_string()
    } else if singular {
        "not classified (singular)".to_string()
    } else {
        match metaclass_of_type(&segre) {
            Some(c) => c.as_str().to_string(),
            None => return Err(Error::IllConditioned(format!("Segre type {segre} matches no metaclass"))),
        }
    };

    let quartic = tamm_rubilar(kappa);
    let (birefringence, factorization) = birefringence_json(&quartic)?;

    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        skewon_free,
        axion: dec.axion,
        determinant: kappa.determinant(),
        segre_label: segre.label(),
        metaclass,
        quartic: quartic.to_json()["quartic"].take(),
        birefringence,
        params: None,
        d_invariants: None,
        closed_form: None,
        residuals: Residuals { decomposition, factorization, closed_form: None },
    })
}

fn birefringence_json(f: &QuarticForm) -> Result<(Value, Option<f64>)> {
    if f.is_zero() {
        return Ok((serde_json::json!({ "tag": null, "note": "Fresnel quartic vanishes identically" }), None));
    }
    let res = factor_quartic(f)?;
    let residual = match res {
        BirefringenceResult::NoQuadricFactorization { .. } => None,
        ref r => Some(r.residual()),
    };
    Ok((res.to_json(), residual))
}

/// [`analyze`] on a normal form, adding its D-invariants and, for the
/// birefringent classes, the closed-form cones when their conditions hold.
pub fn analyze_params(params: &MetaclassParams, opts: &SegreOptions) -> Result<AnalysisReport> {
    let kappa = crate::metaclass::construct_metaclass(params)?;
    let mut report = analyze(&kappa, opts)?;
    report.params = Some(params.clone());
    report.d_invariants = d_invariants(params).ok();
    if let Ok((a, b, c)) = cones_closed_form(params) {
        let (a, b, c) = canonical_pair(a.matrix(), b.matrix(), c);
        let f = tamm_rubilar(&kappa);
        let residual = crate::factor::product_residual(&f, &a, &b, c);
        let rows = |q: &nalgebra::Matrix4<f64>| crate::quadric::QuadricForm::new(*q).rows();
        report.closed_form = Some(serde_json::json!({ "g_plus": rows(&a), "g_minus": rows(&b), "C": c }));
        report.residuals.closed_form = Some(residual);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Matrix4, Matrix6, Vector4, Vector6};

    #[test]
    fn example_medium() {
        let k = MediumTensor::from_matrix(Matrix6::from_diagonal(&Vector6::new(-1.0, 1.0, 0.0, -1.0, 1.0, 0.0)));
        let r = analyze(&k, &SegreOptions::default()).unwrap();
        assert!(r.skewon_free);
        assert_eq!(r.metaclass, "not classified (singular)");
        assert_eq!(r.birefringence["tag"], "ReducibleNonLorentz");
        assert_eq!(r.schema_version, SCHEMA_VERSION);
    }

    #[test]
    fn minkowski_medium() {
        let k = MediumTensor::hodge_star(&Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0))).unwrap();
        let r = analyze(&k, &SegreOptions::default()).unwrap();
        assert_eq!(r.metaclass, "I");
        assert_eq!(r.birefringence["tag"], "SingleCone");
        assert_eq!(r.segre_label, "[1 1bar 1 1bar 1 1bar]");
    }

    #[test]
    fn birefringent_normal_form() {
        let p = MetaclassParams::new(crate::segre::Metaclass::I, &[0.0; 3], &[1.0, 1.0, 2.0]).unwrap();
        let r = analyze_params(&p, &SegreOptions::default()).unwrap();
        assert_eq!(r.birefringence["tag"], "DoubleLightCone");
        let (got, want) = (&r.birefringence["g_plus"], &r.closed_form.as_ref().unwrap()["g_plus"]);
        for i in 0..4 {
            for j in 0..4 {
                assert!((got[i][j].as_f64().unwrap() - want[i][j].as_f64().unwrap()).abs() < 1e-9);
            }
        }
        assert!(r.residuals.closed_form.unwrap() < 1e-12);
        assert_eq!(r.d_invariants.unwrap().d3, 2.0);
    }

    #[test]
    fn reports_are_deterministic() {
        let p = MetaclassParams::reference(crate::segre::Metaclass::VI);
        let a = analyze_params(&p, &SegreOptions::default()).unwrap().to_json_string();
        let b = analyze_params(&p, &SegreOptions::default()).unwrap().to_json_string();
        assert_eq!(a, b);
    }
}
