//! Seeded property suites behind `birelab verify` and the acceptance run.
//!
//! Every draw gets its own counter-based stream, so results do not depend
//! on how rayon schedules the work.

use std::collections::BTreeMap;

use nalgebra::{Matrix4, Matrix6, SymmetricEigen, Vector4, Vector6};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{canonical_pair, factor_quartic, BirefringenceResult, RESIDUAL_TOL};
use crate::fresnel::{multi_index_slot, tamm_rubilar, QuarticForm};
use crate::medium::MediumTensor;
use crate::metaclass::{
    birefringence_condition_i, class_quartic_display, cones_closed_form, construct_metaclass, d_invariants, exclusion_evidence,
    MetaclassParams,
};
use crate::quadric::{gaeta_covariant, quadric_irreducible};
use crate::sampling::{
    draw_rng, random_birefringent_params, random_generic_params, random_lorentz_metric, random_lorentz_pair, random_skewon_free,
    random_symmetric_of_rank, random_well_conditioned, standard_normal,
};
use crate::segre::{metaclass_of, Metaclass};

/// Agreement of recovered and closed-form cones (canonical gauge).
pub const MATCH_TOL: f64 = 1e-7;
/// `|D0|` bound for birefringent class-I media.
pub const D0_TOL: f64 = 1e-9;
/// Relative tolerance of the density covariance identity.
pub const COVARIANCE_TOL: f64 = 1e-9;
/// Relative size below which a coefficient counts as zero in the Example.
pub const EXAMPLE_TOL: f64 = 1e-12;
/// Relative size below which a plane restriction counts as identically zero.
pub const PLANE_TOL: f64 = 1e-10;
/// Relative size below which the Gaeta covariant counts as vanishing.
pub const GAETA_TOL: f64 = 1e-9;
/// Maximum condition number of random coordinate changes.
pub const PULLBACK_COND: f64 = 10.0;

pub const SUITES: [&str; 18] = [
    "example",
    "light-cone",
    "lorentz-pairs",
    "metaclass-I-roundtrip",
    "metaclass-II-roundtrip",
    "metaclass-IV-roundtrip",
    "exclusion-III",
    "exclusion-V",
    "exclusion-VI",
    "exclusion-VII",
    "segre-correspondence",
    "covariance",
    "oracle-equivalence",
    "two-plane",
    "display",
    "uniqueness",
    "class-II-determinant",
    "cone-convergence",
];

/// Draw count used when none is given.
pub fn default_count(suite: &str) -> Result<usize> {
    Ok(match suite {
        "example" | "cone-convergence" => 1,
        "light-cone" | "segre-correspondence" | "two-plane" | "uniqueness" | "class-II-determinant" => 100,
        "covariance" | "display" => 200,
        s if SUITES.contains(&s) => 500,
        s => return Err(Error::UnknownSuite(s.to_string())),
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PropertyCount {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub draw: u64,
    pub property: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub count: usize,
    pub passed: bool,
    pub properties: BTreeMap<String, PropertyCount>,
    /// The first failures in draw order.
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Total checks that failed.
    pub fn failed(&self) -> usize {
        self.properties.values().map(|c| c.failed).sum()
    }
}

const MAX_FAILURES: usize = 20;

type Checks = Vec<(&'static str, std::result::Result<(), String>)>;

fn check(cond: bool, detail: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(detail())
    }
}

pub fn run_suite(suite: &str, seed: u64, count: usize) -> Result<SuiteReport> {
    default_count(suite)?;
    let body: fn(&str, u64, u64, usize) -> Checks = match suite {
        "example" => |_, _, _, _| example_draw(),
        "light-cone" => |_, s, i, _| light_cone_draw(&mut draw_rng(s, i)),
        "lorentz-pairs" => |_, s, i, _| lorentz_pair_draw(&mut draw_rng(s, i)),
        "metaclass-I-roundtrip" => |_, s, i, _| roundtrip_draw(&mut draw_rng(s, i), Metaclass::I),
        "metaclass-II-roundtrip" => |_, s, i, _| roundtrip_draw(&mut draw_rng(s, i), Metaclass::II),
        "metaclass-IV-roundtrip" => |_, s, i, _| roundtrip_draw(&mut draw_rng(s, i), Metaclass::IV),
        "exclusion-III" => |_, s, i, _| exclusion_draw(&mut draw_rng(s, i), Metaclass::III),
        "exclusion-V" => |_, s, i, _| exclusion_draw(&mut draw_rng(s, i), Metaclass::V),
        "exclusion-VI" => |_, s, i, _| exclusion_draw(&mut draw_rng(s, i), Metaclass::VI),
        "exclusion-VII" => |_, s, i, _| exclusion_draw(&mut draw_rng(s, i), Metaclass::VII),
        "segre-correspondence" => |_, s, i, _| segre_draw(&mut draw_rng(s, i)),
        "covariance" => |_, s, i, _| covariance_draw(&mut draw_rng(s, i)),
        "oracle-equivalence" => |_, s, i, _| oracle_draw(&mut draw_rng(s, i), 1 + (i % 4) as usize),
        "two-plane" => |_, s, i, _| two_plane_draw(&mut draw_rng(s, i)),
        "display" => |_, s, i, _| display_draw(&mut draw_rng(s, i)),
        "uniqueness" => |_, s, i, _| uniqueness_draw(&mut draw_rng(s, i)),
        "class-II-determinant" => |_, _, i, n| class_ii_determinant_draw(10.0 * (i + 1) as f64 / n as f64),
        "cone-convergence" => |_, _, _, _| cone_convergence_draw(),
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    let results: Vec<(u64, Checks)> = (0..count as u64).into_par_iter().map(|i| (i, body(suite, seed, i, count))).collect();

    let mut properties: BTreeMap<String, PropertyCount> = BTreeMap::new();
    let mut failures = Vec::new();
    for (draw, checks) in results {
        for (name, outcome) in checks {
            let entry = properties.entry(name.to_string()).or_default();
            match outcome {
                Ok(()) => entry.passed += 1,
                Err(detail) => {
                    entry.failed += 1;
                    if failures.len() < MAX_FAILURES {
                        failures.push(Failure { draw, property: name.to_string(), detail });
                    }
                }
            }
        }
    }
    let passed = count > 0 && properties.values().all(|c| c.failed == 0);
    Ok(SuiteReport { suite: suite.to_string(), seed, count, passed, properties, failures })
}

fn error_check(e: Error) -> Checks {
    vec![("no-error", Err(e.to_string()))]
}

/// Largest entrywise gap between a recovered factor pair and an expected one,
/// both in canonical gauge, with the constant compared relatively.
fn pair_gap(res: &BirefringenceResult, a: &Matrix4<f64>, b: &Matrix4<f64>, c: f64) -> Option<f64> {
    let (ea, eb, ec) = canonical_pair(a, b, c);
    let (ga, gb, gc) = match res {
        BirefringenceResult::DoubleLightCone { g_plus, g_minus, c, .. } => (*g_plus.matrix(), *g_minus.matrix(), *c),
        BirefringenceResult::SingleCone { g, c, .. } => (*g.matrix(), *g.matrix(), *c),
        BirefringenceResult::ReducibleNonLorentz { first, second, c, .. } => (*first.matrix(), *second.matrix(), *c),
        BirefringenceResult::NoQuadricFactorization { .. } => return None,
    };
    Some((ga - ea).amax().max((gb - eb).amax()).max((gc - ec).abs() / ec.abs()))
}

pub fn example_medium() -> MediumTensor {
    MediumTensor::from_matrix(Matrix6::from_diagonal(&Vector6::new(-1.0, 1.0, 0.0, -1.0, 1.0, 0.0)))
}

fn example_draw() -> Checks {
    let f = tamm_rubilar(&example_medium());
    let slot = multi_index_slot([0, 1, 2, 3]);
    let coeffs = f.coefficients();
    let norm = f.norm();
    let stray = coeffs.iter().enumerate().filter(|(i, _)| *i != slot).map(|(_, c)| c.abs()).fold(0.0, f64::max);
    let mut out: Checks = vec![(
        "single-coefficient",
        check(norm > 0.0 && coeffs[slot] != 0.0 && stray <= EXAMPLE_TOL * norm, || format!("stray coefficient {stray:e}")),
    )];
    match factor_quartic(&f) {
        Ok(r) => out.push(("not-double-light-cone", check(!r.is_double_light_cone(), || "double light cone".into()))),
        Err(e) => out.push(("not-double-light-cone", Err(e.to_string()))),
    }
    out
}

/// Null covectors of a Lorentz quadric `q`.
fn null_covectors(rng: &mut ChaCha8Rng, q: &Matrix4<f64>, n: usize) -> Vec<Vector4<f64>> {
    let eig = SymmetricEigen::new(*q);
    let positives = eig.eigenvalues.iter().filter(|l| **l > 0.0).count();
    let odd = (0..4).find(|&i| (eig.eigenvalues[i] > 0.0) == (positives == 1)).expect("Lorentz signature");
    (0..n)
        .map(|_| {
            let mut y = Vector4::from_fn(|_, _| standard_normal(rng));
            let rest: f64 = (0..4).filter(|&i| i != odd).map(|i| eig.eigenvalues[i].abs() * y[i] * y[i]).sum();
            y[odd] = (rest / eig.eigenvalues[odd].abs()).sqrt();
            eig.eigenvectors * y
        })
        .collect()
}

fn light_cone_draw(rng: &mut ChaCha8Rng) -> Checks {
    let g = random_lorentz_metric(rng);
    let kappa = match MediumTensor::hodge_star(&g) {
        Ok(k) => k,
        Err(e) => return error_check(e),
    };
    let f = tamm_rubilar(&kappa);
    let ginv = g.try_inverse().expect("Lorentz metrics are invertible");
    let res = match factor_quartic(&f) {
        Ok(r) => r,
        Err(e) => return error_check(e),
    };
    let mut out: Checks = Vec::new();
    out.push((
        "single-cone",
        check(matches!(res, BirefringenceResult::SingleCone { residual, .. } if residual <= RESIDUAL_TOL), || {
            format!("{} residual {:e}", res.tag().as_str(), res.residual())
        }),
    ));
    let (eg, _, _) = canonical_pair(&ginv, &ginv, 1.0);
    let gap = match &res {
        BirefringenceResult::SingleCone { g, .. } => (g.matrix() - eg).amax(),
        _ => f64::INFINITY,
    };
    out.push(("inverse-metric", check(gap <= MATCH_TOL, || format!("gap {gap:e}"))));
    let scale = f.norm();
    let worst = null_covectors(rng, &ginv, 100)
        .iter()
        .map(|xi| f.evaluate(xi).abs() / (scale * xi.norm_squared().powi(2)))
        .fold(0.0, f64::max);
    out.push(("null-covectors", check(worst <= 1e-9, || format!("|f| = {worst:e} on a null covector"))));
    out
}

fn lorentz_pair_draw(rng: &mut ChaCha8Rng) -> Checks {
    let (a, b, c) = random_lorentz_pair(rng);
    let f = crate::factor::product_quartic(&a, &b, c);
    match factor_quartic(&f) {
        Ok(res) => {
            let gap = pair_gap(&res, &a, &b, c).unwrap_or(f64::INFINITY);
            vec![
                ("double-light-cone", check(res.is_double_light_cone(), || res.tag().as_str().to_string())),
                ("recovered-pair", check(gap <= MATCH_TOL, || format!("gap {gap:e}"))),
            ]
        }
        Err(e) => error_check(e),
    }
}

/// No 2-plane inside `{f = 0}`: the restriction to each tested plane is not
/// identically zero.
pub fn contains_no_two_plane(f: &QuarticForm, rng: &mut ChaCha8Rng, random_planes: usize) -> std::result::Result<(), String> {
    let e = |i: usize| Vector4::from_fn(|r, _| if r == i { 1.0 } else { 0.0 });
    let mut planes: Vec<(Vector4<f64>, Vector4<f64>)> = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            planes.push((e(i), e(j)));
        }
    }
    for _ in 0..random_planes {
        let u = Vector4::from_fn(|_, _| standard_normal(rng)).normalize();
        let v = Vector4::from_fn(|_, _| standard_normal(rng));
        let v = (v - u * u.dot(&v)).normalize();
        planes.push((u, v));
    }
    let scale = f.norm();
    for (k, (u, v)) in planes.iter().enumerate() {
        let coeffs = f.restrict_to_plane(u, v).map_err(|e| e.to_string())?;
        let size = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        if size <= PLANE_TOL * scale {
            return Err(format!("plane {k} lies in the zero set (restriction size {size:e})"));
        }
    }
    Ok(())
}

fn roundtrip_draw(rng: &mut ChaCha8Rng, class: Metaclass) -> Checks {
    let p = random_birefringent_params(rng, class);
    let kappa = match construct_metaclass(&p) {
        Ok(k) => k,
        Err(e) => return error_check(e),
    };
    let f = tamm_rubilar(&kappa);
    let (res, (a, b, c)) = match (factor_quartic(&f), cones_closed_form(&p)) {
        (Ok(r), Ok(cf)) => (r, cf),
        (Err(e), _) | (_, Err(e)) => return error_check(e),
    };
    let mut out: Checks = Vec::new();
    out.push(("double-light-cone", check(res.is_double_light_cone(), || format!("{} for {p:?}", res.tag().as_str()))));
    let gap = pair_gap(&res, a.matrix(), b.matrix(), c).unwrap_or(f64::INFINITY);
    out.push(("closed-form-match", check(gap <= MATCH_TOL, || format!("gap {gap:e} for {p:?}"))));
    if let BirefringenceResult::DoubleLightCone { g_plus, g_minus, .. } = &res {
        out.push((
            "lorentz-signatures",
            check(g_plus.is_lorentz() && g_minus.is_lorentz(), || format!("{} and {}", g_plus.signature(), g_minus.signature())),
        ));
    }
    match class {
        Metaclass::I => {
            out.push(("condition", check(matches!(birefringence_condition_i(&p), Ok(Some(_))), || format!("{p:?}"))));
            match d_invariants(&p) {
                Ok(d) => out.push(("d0-zero", check(d.d0.abs() <= D0_TOL, || format!("D0 = {:e}", d.d0)))),
                Err(e) => out.push(("d0-zero", Err(e.to_string()))),
            }
        }
        _ => {
            let expected = match class {
                Metaclass::II => p.beta[0],
                _ => p.beta[0] * p.beta[1] * p.alpha[3],
            };
            // undo the canonical gauge of the closed-form pair to read off C
            let (_, _, ec) = canonical_pair(a.matrix(), b.matrix(), c);
            let recovered = match &res {
                BirefringenceResult::DoubleLightCone { c: rc, .. } => rc * c / ec,
                _ => f64::NAN,
            };
            let err = (recovered - expected).abs() / expected.abs();
            out.push(("class-constant", check(err <= MATCH_TOL, || format!("C = {recovered}, expected {expected}"))));
        }
    }
    if res.is_double_light_cone() {
        out.push(("two-plane", contains_no_two_plane(&f, rng, 100)));
    }
    out
}

fn exclusion_draw(rng: &mut ChaCha8Rng, class: Metaclass) -> Checks {
    let p = random_generic_params(rng, class);
    match exclusion_evidence(&p) {
        Ok(ev) => {
            let mut out: Checks =
                vec![("not-double-light-cone", check(!ev.result.is_double_light_cone(), || format!("double light cone for {p:?}")))];
            if class == Metaclass::VI {
                out.push((
                    "candidates-non-lorentz",
                    check(ev.candidate_signatures.len() == 2 && ev.excluded(), || format!("{:?}", ev.candidate_signatures)),
                ));
            }
            out
        }
        Err(e) => error_check(e),
    }
}

fn segre_draw(rng: &mut ChaCha8Rng) -> Checks {
    const NAMES: [&str; 7] = ["class-I", "class-II", "class-III", "class-IV", "class-V", "class-VI", "class-VII"];
    let mut out: Checks = Vec::new();
    for (class, name) in Metaclass::NORMAL_FORMS.into_iter().zip(NAMES) {
        let p = random_generic_params(rng, class);
        let kappa = match construct_metaclass(&p) {
            Ok(k) => k,
            Err(e) => {
                out.push((name, Err(e.to_string())));
                continue;
            }
        };
        let mut outcome = Ok(());
        for j in 0..=10 {
            let k = if j == 0 { Ok(kappa) } else { kappa.pullback(&random_well_conditioned(rng, PULLBACK_COND)) };
            let got = k.and_then(|k| metaclass_of(&k));
            if got.as_ref().ok() != Some(&class) {
                outcome = Err(format!("pullback {j}: {got:?} for {p:?}"));
                break;
            }
        }
        out.push((name, outcome));
    }
    out
}

fn covariance_draw(rng: &mut ChaCha8Rng) -> Checks {
    let kappa = random_skewon_free(rng);
    let t = random_well_conditioned(rng, PULLBACK_COND);
    let lhs = tamm_rubilar(&kappa).transform_density(&t);
    let rhs = kappa.pullback(&t).map(|k| tamm_rubilar(&k));
    match (lhs, rhs) {
        (Ok(l), Ok(r)) => {
            let err = l.distance(&r) / r.norm();
            vec![("density-covariance", check(err <= COVARIANCE_TOL, || format!("relative error {err:e}")))]
        }
        (Err(e), _) | (_, Err(e)) => error_check(e),
    }
}

fn oracle_draw(rng: &mut ChaCha8Rng, rank: usize) -> Checks {
    let q = random_symmetric_of_rank(rng, rank);
    let irreducible = match quadric_irreducible(&q) {
        Ok(b) => b,
        Err(e) => return error_check(e),
    };
    let scale = q.norm().powi(3);
    let vanishes = (0..50).all(|_| {
        let mut v = || Vector4::from_fn(|_, _| standard_normal(rng)).normalize();
        let (x, y, z) = (v(), v(), v());
        gaeta_covariant(&q, &x, &y, &z).abs() <= GAETA_TOL * scale
    });
    vec![(
        "adjugate-iff-gaeta",
        check(irreducible != vanishes, || format!("rank {rank}: irreducible {irreducible}, Gaeta vanishes {vanishes}")),
    )]
}

fn two_plane_draw(rng: &mut ChaCha8Rng) -> Checks {
    let (a, b, c) = random_lorentz_pair(rng);
    let f = crate::factor::product_quartic(&a, &b, c);
    match factor_quartic(&f) {
        Ok(r) if r.is_double_light_cone() => vec![("two-plane", contains_no_two_plane(&f, rng, 100))],
        Ok(r) => vec![("two-plane", Err(format!("{} result", r.tag().as_str())))],
        Err(e) => error_check(e),
    }
}

fn display_draw(rng: &mut ChaCha8Rng) -> Checks {
    const CLASSES: [(Metaclass, &str); 4] =
        [(Metaclass::I, "class-I"), (Metaclass::IV, "class-IV"), (Metaclass::VI, "class-VI"), (Metaclass::VII, "class-VII")];
    CLASSES
        .iter()
        .map(|&(class, name)| {
            let p = random_generic_params(rng, class);
            let outcome = construct_metaclass(&p).and_then(|k| Ok((tamm_rubilar(&k), class_quartic_display(&p)?)));
            let outcome = match outcome {
                Ok((f, d)) => {
                    let err = f.distance(&d) / f.norm();
                    check(err <= 1e-10, || format!("relative error {err:e}"))
                }
                Err(e) => Err(e.to_string()),
            };
            (name, outcome)
        })
        .collect()
}

fn uniqueness_draw(rng: &mut ChaCha8Rng) -> Checks {
    let (a, b, c) = random_lorentz_pair(rng);
    let f = crate::factor::product_quartic(&a, &b, c);
    let seeds = [rng.random::<u64>(), rng.random::<u64>()];
    let runs: Vec<_> = seeds
        .iter()
        .map(|&seed| crate::factor::factor_quartic_with(&f, &crate::factor::FactorOptions { seed, ..Default::default() }))
        .collect();
    match (&runs[0], &runs[1]) {
        (Ok(x), Ok(y)) => {
            let same = match (x, y) {
                (
                    BirefringenceResult::DoubleLightCone { g_plus: a1, g_minus: b1, c: c1, .. },
                    BirefringenceResult::DoubleLightCone { g_plus: a2, g_minus: b2, c: c2, .. },
                ) => {
                    (a1.matrix() - a2.matrix()).amax() <= MATCH_TOL
                        && (b1.matrix() - b2.matrix()).amax() <= MATCH_TOL
                        && (c1 - c2).abs() <= MATCH_TOL * c1.abs()
                }
                _ => false,
            };
            vec![("same-canonical-pair", check(same, || format!("{} vs {}", x.tag().as_str(), y.tag().as_str())))]
        }
        (Err(e), _) | (_, Err(e)) => vec![("no-error", Err(e.to_string()))],
    }
}

fn class_ii_determinant_draw(beta: f64) -> Checks {
    let p = MetaclassParams { class: Metaclass::II, alpha: vec![0.0, 0.0], beta: vec![beta, beta] };
    match cones_closed_form(&p) {
        Ok((a, b, _)) => {
            let (da, db) = (a.matrix().determinant(), b.matrix().determinant());
            vec![("negative-determinants", check(da < 0.0 && db < 0.0, || format!("beta {beta}: det {da}, {db}")))]
        }
        Err(e) => error_check(e),
    }
}

/// Canonical `‖g₊ − g₋‖_F` of the recovered class-II cones.
pub fn class_ii_cone_gap(beta: f64) -> Result<f64> {
    let p = MetaclassParams { class: Metaclass::II, alpha: vec![0.0, 0.0], beta: vec![beta, beta] };
    match factor_quartic(&tamm_rubilar(&construct_metaclass(&p)?))? {
        BirefringenceResult::DoubleLightCone { g_plus, g_minus, .. } => Ok((g_plus.matrix() - g_minus.matrix()).norm()),
        other => Err(Error::ConsistencyCheck(format!("class II beta {beta}: {}", other.tag().as_str()))),
    }
}

pub const CONVERGENCE_BETAS: [f64; 5] = [1.0, 2.0, 4.0, 8.0, 16.0];

fn cone_convergence_draw() -> Checks {
    let gaps: Result<Vec<f64>> = CONVERGENCE_BETAS.iter().map(|&b| class_ii_cone_gap(b)).collect();
    match gaps {
        Ok(g) => vec![("decreasing-gap", check(g.windows(2).all(|w| w[1] < w[0]), || format!("gaps {g:?}")))],
        Err(e) => error_check(e),
    }
}
