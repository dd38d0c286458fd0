//! Factorization of quartic forms into two quadrics.
//!
//! A quartic `f` is matched against `C·(ξᵀAξ)(ξᵀBξ)` by nonlinear least
//! squares on the 35 monomial coefficients (20 unknowns, gauge `‖A‖ = 1`,
//! `C` absorbed into `B`). Starting points come from root pairing: at a
//! handful of generic points `ξ' = (ξ1, ξ2, ξ3)` the quartic in `ξ0` is
//! solved, each of the three ways to split its four roots into two pairs is
//! tried, and the candidate quadrics are fitted by linear least squares.
//! Root labels are carried from one sample to the next by continuation
//! along a path that leaves the real domain, so they never collide.
//!
//! Every accepted factorization is verified by its residual on a fixed
//! unisolvent grid of 35 points.

use nalgebra::{Complex, DMatrix, DVector, Matrix4, SMatrix, SVector, Vector3, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::basis::max_abs;
use crate::error::{Error, Result};
use crate::fresnel::{multi_index_slot, QuarticForm, MULTI_INDICES};
use crate::quadric::QuadricForm;
use crate::sampling;

type C64 = Complex<f64>;

/// Largest grid residual (relative to `‖f‖`) of an accepted factorization.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Canonical factors closer than this are the same cone.
pub const PROPORTIONAL_TOL: f64 = 1e-7;
/// Factors this close are tested as a perfect square.
const SQUARE_TOL: f64 = 1e-4;
/// Below this relative size of the `ξ0⁴` coefficient the quartic is rotated first.
const LEADING_TOL: f64 = 1e-3;

/// Quadratic monomials `ξiξj`, `i ≤ j`, in the order used for parameter vectors.
const QUAD: [(usize, usize); 10] = [(0, 0), (0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)];

/// The three ways to split four roots into two pairs.
const PAIRINGS: [([usize; 2], [usize; 2]); 3] = [([0, 1], [2, 3]), ([0, 2], [1, 3]), ([0, 3], [1, 2])];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BirefringenceTag {
    DoubleLightCone,
    SingleCone,
    ReducibleNonLorentz,
    NoQuadricFactorization,
}

impl BirefringenceTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::DoubleLightCone => "DoubleLightCone",
            Self::SingleCone => "SingleCone",
            Self::ReducibleNonLorentz => "ReducibleNonLorentz",
            Self::NoQuadricFactorization => "NoQuadricFactorization",
        }
    }
}

/// Outcome of [`factor_quartic`]. Quadrics are in canonical gauge (see
/// [`canonical_pair`]); `f = c·(ξᵀ g_plus ξ)(ξᵀ g_minus ξ)`.
#[derive(Debug, Clone, PartialEq)]
pub enum BirefringenceResult {
    DoubleLightCone { g_plus: QuadricForm, g_minus: QuadricForm, c: f64, residual: f64 },
    SingleCone { g: QuadricForm, c: f64, residual: f64 },
    ReducibleNonLorentz { first: QuadricForm, second: QuadricForm, c: f64, residual: f64 },
    NoQuadricFactorization { best_residual: f64 },
}

impl BirefringenceResult {
    pub fn tag(&self) -> BirefringenceTag {
        match self {
            Self::DoubleLightCone { .. } => BirefringenceTag::DoubleLightCone,
            Self::SingleCone { .. } => BirefringenceTag::SingleCone,
            Self::ReducibleNonLorentz { .. } => BirefringenceTag::ReducibleNonLorentz,
            Self::NoQuadricFactorization { .. } => BirefringenceTag::NoQuadricFactorization,
        }
    }

    pub fn is_double_light_cone(&self) -> bool {
        self.tag() == BirefringenceTag::DoubleLightCone
    }

    pub fn residual(&self) -> f64 {
        match self {
            Self::DoubleLightCone { residual, .. } | Self::SingleCone { residual, .. } | Self::ReducibleNonLorentz { residual, .. } => *residual,
            Self::NoQuadricFactorization { best_residual } => *best_residual,
        }
    }

    /// `{"tag": "...", "g_plus": [[..]], "g_minus": [[..]], "C": c, "residual": r}`.
    /// A single cone reports its quadric under both keys; a failed
    /// factorization only carries the tag and its best residual.
    pub fn to_json(&self) -> Value {
        match self {
            Self::DoubleLightCone { g_plus, g_minus, c, residual } => json!({
                "tag": self.tag().as_str(), "g_plus": g_plus.rows(), "g_minus": g_minus.rows(), "C": c, "residual": residual,
            }),
            Self::SingleCone { g, c, residual } => json!({
                "tag": self.tag().as_str(), "g_plus": g.rows(), "g_minus": g.rows(), "C": c, "residual": residual,
            }),
            Self::ReducibleNonLorentz { first, second, c, residual } => json!({
                "tag": self.tag().as_str(), "g_plus": first.rows(), "g_minus": second.rows(), "C": c, "residual": residual,
                "signatures": [first.signature().to_string(), second.signature().to_string()],
            }),
            Self::NoQuadricFactorization { best_residual } => json!({
                "tag": self.tag().as_str(), "residual": best_residual,
            }),
        }
    }
}

/// A verified factorization `f = c·(ξᵀaξ)(ξᵀbξ)` in canonical gauge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Factorization {
    pub a: Matrix4<f64>,
    pub b: Matrix4<f64>,
    pub c: f64,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct FactorOptions {
    /// Seeds the sample points, path detours and coordinate rotations.
    pub seed: u64,
    /// Number of `ξ'` samples used for root pairing.
    pub samples: usize,
    /// Number of random rotations tried after the original coordinates.
    pub rotations: usize,
    pub max_iterations: usize,
}

impl Default for FactorOptions {
    fn default() -> Self {
        Self { seed: 0x5eed_f4c7, samples: 8, rotations: 2, max_iterations: 200 }
    }
}

/// Decides whether `f` factors into quadrics and classifies the factors.
pub fn factor_quartic(f: &QuarticForm) -> Result<BirefringenceResult> {
    factor_quartic_with(f, &FactorOptions::default())
}

pub fn factor_quartic_with(f: &QuarticForm, opts: &FactorOptions) -> Result<BirefringenceResult> {
    let (found, best) = search(f, opts)?;
    Ok(classify(f, found, best))
}

/// All distinct verified factorizations found from the multi-start solve of
/// the first coordinate system that yields any.
pub fn factorizations(f: &QuarticForm, opts: &FactorOptions) -> Result<Vec<Factorization>> {
    search(f, opts).map(|(found, _)| found)
}

fn classify(f: &QuarticForm, found: Vec<Factorization>, best_residual: f64) -> BirefringenceResult {
    let mut lorentz = None;
    let mut other = None;
    for fac in found {
        let (a, b) = (QuadricForm::new(fac.a), QuadricForm::new(fac.b));
        let slot = if a.is_lorentz() && b.is_lorentz() { &mut lorentz } else { &mut other };
        if slot.as_ref().is_none_or(|(_, _, prev): &(QuadricForm, QuadricForm, Factorization)| fac.residual < prev.residual) {
            *slot = Some((a, b, fac));
        }
    }
    if let Some((a, b, fac)) = lorentz {
        if max_abs(&(fac.a - fac.b)) <= PROPORTIONAL_TOL {
            let g = QuadricForm::new((fac.a + fac.b) * 0.5);
            return BirefringenceResult::SingleCone { g, c: fac.c, residual: fac.residual };
        }
        // near a repeated factor the two fitted halves only agree to about √ε
        if max_abs(&(fac.a - fac.b)) <= SQUARE_TOL {
            let (g, _, c) = canonical_pair(&((fac.a + fac.b) * 0.5), &((fac.a + fac.b) * 0.5), fac.c);
            let residual = product_residual(f, &g, &g, c);
            if residual <= RESIDUAL_TOL {
                return BirefringenceResult::SingleCone { g: QuadricForm::new(g), c, residual };
            }
        }
        return BirefringenceResult::DoubleLightCone { g_plus: a, g_minus: b, c: fac.c, residual: fac.residual };
    }
    if let Some((a, b, fac)) = other {
        return BirefringenceResult::ReducibleNonLorentz { first: a, second: b, c: fac.c, residual: fac.residual };
    }
    BirefringenceResult::NoQuadricFactorization { best_residual }
}

fn search(f: &QuarticForm, opts: &FactorOptions) -> Result<(Vec<Factorization>, f64)> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let mono = f.monomials();
    let scale = mono.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let leading = mono[0].abs() / scale;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut frames = Vec::new();
    if leading >= LEADING_TOL {
        frames.push(Matrix4::identity());
    }
    for _ in 0..opts.rotations.max(if frames.is_empty() { 1 } else { 0 }) {
        frames.push(sampling::random_rotation(&mut rng));
    }

    let mut best = f64::INFINITY;
    for rot in frames {
        let rotated = f.substitute(&rot);
        let mono = rotated.monomials();
        let scale = mono.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        let target = mono.map(|m| m / scale);
        if target[0].abs() < LEADING_TOL * 1e-3 {
            continue;
        }
        let mut found: Vec<Factorization> = Vec::new();
        for seed in root_pairing_seeds(&target, opts.samples, &mut rng) {
            let x = levenberg_marquardt(&target, seed, opts.max_iterations);
            let (a_rot, b_rot) = unpack(&x);
            // back to the original coordinates: A = R·Ã·Rᵀ
            let a = rot * a_rot * rot.transpose();
            let b = rot * b_rot * rot.transpose();
            let residual = product_residual(f, &a, &b, scale);
            best = best.min(residual);
            if residual <= RESIDUAL_TOL {
                let (a, b, c) = canonical_pair(&a, &b, scale);
                if !found.iter().any(|g| same_pair(g, &a, &b)) {
                    found.push(Factorization { a, b, c, residual });
                }
            }
        }
        if !found.is_empty() {
            found.sort_by(|x, y| x.residual.total_cmp(&y.residual).then_with(|| lex_cmp(&x.a, &y.a)));
            return Ok((found, best));
        }
    }
    Ok((Vec::new(), best))
}

fn same_pair(g: &Factorization, a: &Matrix4<f64>, b: &Matrix4<f64>) -> bool {
    max_abs(&(g.a - a)) < 1e-6 && max_abs(&(g.b - b)) < 1e-6
}

/// The quartic `c·(ξᵀaξ)(ξᵀbξ)`.
pub fn product_quartic(a: &Matrix4<f64>, b: &Matrix4<f64>, c: f64) -> QuarticForm {
    let (pa, pb) = (pack_quadric(a), pack_quadric(b));
    let mut mono = [0.0; 35];
    for p in 0..10 {
        for q in 0..10 {
            mono[PRODUCT_SLOT[p][q]] += c * pa[p] * pb[q];
        }
    }
    QuarticForm::from_monomials(&mono)
}

/// The 35 points `α/4` for all multi-indices `|α| = 4`; a unisolvent set for
/// quartic forms.
pub fn residual_grid() -> [Vector4<f64>; 35] {
    let mut out = [Vector4::zeros(); 35];
    for (p, m) in out.iter_mut().zip(MULTI_INDICES.iter()) {
        for &i in m {
            p[i] += 0.25;
        }
    }
    out
}

/// `max_grid |f(ξ) − c·(ξᵀaξ)(ξᵀbξ)| / ‖f‖`.
pub fn product_residual(f: &QuarticForm, a: &Matrix4<f64>, b: &Matrix4<f64>, c: f64) -> f64 {
    let norm = f.norm();
    let qa = |x: &Vector4<f64>| (x.transpose() * a * x)[(0, 0)];
    let qb = |x: &Vector4<f64>| (x.transpose() * b * x)[(0, 0)];
    residual_grid()
        .iter()
        .map(|x| (f.evaluate(x) - c * qa(x) * qb(x)).abs())
        .fold(0.0, f64::max)
        / norm
}

/// Gauge-fixes a factor pair: each quadric is scaled so that its
/// largest-magnitude entry (first in row-major order on ties) is `+1`, the
/// pair is sorted lexicographically and `c` absorbs the scales.
pub fn canonical_pair(a: &Matrix4<f64>, b: &Matrix4<f64>, c: f64) -> (Matrix4<f64>, Matrix4<f64>, f64) {
    let (a1, sa) = normalize_quadric(a);
    let (b1, sb) = normalize_quadric(b);
    let c1 = c * sa * sb;
    if lex_cmp(&b1, &a1).is_lt() {
        (b1, a1, c1)
    } else {
        (a1, b1, c1)
    }
}

fn normalize_quadric(q: &Matrix4<f64>) -> (Matrix4<f64>, f64) {
    let q = (q + q.transpose()) * 0.5;
    let m = max_abs(&q);
    if m == 0.0 {
        return (q, 1.0);
    }
    let pivot = (0..4)
        .flat_map(|r| (r..4).map(move |c| (r, c)))
        .map(|(r, c)| q[(r, c)])
        .find(|v| v.abs() >= m * (1.0 - 1e-6))
        .expect("maximum is attained");
    (q / pivot, pivot)
}

fn lex_cmp(a: &Matrix4<f64>, b: &Matrix4<f64>) -> std::cmp::Ordering {
    for r in 0..4 {
        for c in 0..4 {
            let (x, y) = (a[(r, c)], b[(r, c)]);
            if (x - y).abs() > 1e-9 {
                return x.total_cmp(&y);
            }
        }
    }
    std::cmp::Ordering::Equal
}

// ---------------------------------------------------------------------------
// parameterization

const fn product_slots() -> [[usize; 10]; 10] {
    let mut out = [[0usize; 10]; 10];
    let mut p = 0;
    while p < 10 {
        let mut q = 0;
        while q < 10 {
            let mut counts = [0usize; 4];
            counts[QUAD[p].0] += 1;
            counts[QUAD[p].1] += 1;
            counts[QUAD[q].0] += 1;
            counts[QUAD[q].1] += 1;
            // position of the sorted multi-index with these counts
            let mut slot = 0;
            let mut found = false;
            let mut i = 0;
            while i < 4 && !found {
                let mut j = i;
                while j < 4 && !found {
                    let mut k = j;
                    while k < 4 && !found {
                        let mut l = k;
                        while l < 4 && !found {
                            let mut c = [0usize; 4];
                            c[i] += 1;
                            c[j] += 1;
                            c[k] += 1;
                            c[l] += 1;
                            if c[0] == counts[0] && c[1] == counts[1] && c[2] == counts[2] && c[3] == counts[3] {
                                found = true;
                            } else {
                                slot += 1;
                            }
                            l += 1;
                        }
                        k += 1;
                    }
                    j += 1;
                }
                i += 1;
            }
            out[p][q] = slot;
            q += 1;
        }
        p += 1;
    }
    out
}

/// `PRODUCT_SLOT[p][q]`: monomial slot of `QUAD[p]·QUAD[q]`.
const PRODUCT_SLOT: [[usize; 10]; 10] = product_slots();

/// Monomial coefficients of `ξᵀQξ` in [`QUAD`] order.
fn pack_quadric(q: &Matrix4<f64>) -> [f64; 10] {
    QUAD.map(|(i, j)| if i == j { q[(i, j)] } else { q[(i, j)] + q[(j, i)] })
}

fn unpack_quadric(v: &[f64]) -> Matrix4<f64> {
    let mut q = Matrix4::zeros();
    for (p, &(i, j)) in QUAD.iter().enumerate() {
        if i == j {
            q[(i, i)] = v[p];
        } else {
            q[(i, j)] = v[p] / 2.0;
            q[(j, i)] = v[p] / 2.0;
        }
    }
    q
}

fn unpack(x: &SVector<f64, 20>) -> (Matrix4<f64>, Matrix4<f64>) {
    (unpack_quadric(&x.as_slice()[..10]), unpack_quadric(&x.as_slice()[10..]))
}

// ---------------------------------------------------------------------------
// Levenberg–Marquardt on the coefficient equations

const NRES: usize = 36;

fn residuals(target: &[f64; 35], x: &SVector<f64, 20>) -> (SVector<f64, NRES>, SMatrix<f64, NRES, 20>) {
    let (a, b) = (&x.as_slice()[..10], &x.as_slice()[10..]);
    let mut r = SVector::<f64, NRES>::zeros();
    let mut jac = SMatrix::<f64, NRES, 20>::zeros();
    for (t, v) in target.iter().enumerate() {
        r[t] = -v;
    }
    for p in 0..10 {
        for q in 0..10 {
            let t = PRODUCT_SLOT[p][q];
            r[t] += a[p] * b[q];
            jac[(t, p)] += b[q];
            jac[(t, 10 + q)] += a[p];
        }
    }
    r[35] = a.iter().map(|v| v * v).sum::<f64>() - 1.0;
    for p in 0..10 {
        jac[(35, p)] = 2.0 * a[p];
    }
    (r, jac)
}

fn levenberg_marquardt(target: &[f64; 35], start: SVector<f64, 20>, max_iterations: usize) -> SVector<f64, 20> {
    let mut x = start;
    let mut lambda = 1e-3;
    let (mut r, mut jac) = residuals(target, &x);
    let mut cost = r.norm_squared();
    for _ in 0..max_iterations {
        if r.amax() < 1e-15 {
            break;
        }
        let jtj = jac.transpose() * jac;
        let grad = jac.transpose() * r;
        let mut improved = false;
        while lambda < 1e12 {
            let mut damped = jtj;
            for i in 0..20 {
                damped[(i, i)] += lambda * (jtj[(i, i)] + 1e-12);
            }
            let Some(step) = damped.cholesky().map(|ch| ch.solve(&(-grad))) else {
                lambda *= 4.0;
                continue;
            };
            let trial = x + step;
            let (tr, tj) = residuals(target, &trial);
            let trial_cost = tr.norm_squared();
            if trial_cost < cost {
                let gain = cost - trial_cost;
                x = trial;
                r = tr;
                jac = tj;
                cost = trial_cost;
                lambda = (lambda / 3.0).max(1e-15);
                improved = gain > 1e-32;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    x
}

// ---------------------------------------------------------------------------
// root-pairing seeds

/// Coefficients (ascending powers of `ξ0`) of the quartic restricted to
/// the line through `(0, ξ')` along `e0`, for complex `ξ'`.
fn xi0_polynomial(target: &[f64; 35], xp: &[C64; 3]) -> [C64; 5] {
    let mut out = [C64::new(0.0, 0.0); 5];
    for (slot, m) in MULTI_INDICES.iter().enumerate() {
        let mut power = 0;
        let mut term = C64::new(target[slot], 0.0);
        for &i in m {
            if i == 0 {
                power += 1;
            } else {
                term *= xp[i - 1];
            }
        }
        out[power] += term;
    }
    out
}

fn horner(c: &[C64; 5], z: C64) -> (C64, C64) {
    let mut p = c[4];
    let mut dp = C64::new(0.0, 0.0);
    for k in (0..4).rev() {
        dp = dp * z + p;
        p = p * z + c[k];
    }
    (p, dp)
}

/// Aberth–Ehrlich iteration from the given starting roots.
fn aberth(c: &[C64; 5], start: [C64; 4], iterations: usize) -> Option<[C64; 4]> {
    let mut z = start;
    for _ in 0..iterations {
        let mut max_step: f64 = 0.0;
        for k in 0..4 {
            let (p, dp) = horner(c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let w = p / dp;
            let s: C64 = (0..4).filter(|&j| j != k).map(|j| C64::new(1.0, 0.0) / (z[k] - z[j])).sum();
            let step = w / (C64::new(1.0, 0.0) - w * s);
            if !step.re.is_finite() || !step.im.is_finite() {
                return None;
            }
            z[k] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z.iter().all(|v| v.re.is_finite() && v.im.is_finite()).then_some(z)
}

fn roots_from_scratch(c: &[C64; 5]) -> Option<[C64; 4]> {
    let bound = 1.0 + (0..4).map(|k| (c[k] / c[4]).norm()).fold(0.0, f64::max);
    let start = [0, 1, 2, 3].map(|k| C64::from_polar(0.5 * bound, 0.4 + k as f64 * std::f64::consts::FRAC_PI_2));
    aberth(c, start, 2000)
}

/// Carries labelled roots from `from` to `to` along a detour into complex `ξ'`.
fn track_roots(target: &[f64; 35], from: &Vector3<f64>, to: &Vector3<f64>, detour: &Vector3<f64>, start: [C64; 4]) -> Option<[C64; 4]> {
    let point = |t: f64| -> [C64; 3] {
        let bump = (std::f64::consts::PI * t).sin();
        [0, 1, 2].map(|i| C64::new(from[i] + t * (to[i] - from[i]), bump * detour[i]))
    };
    let mut roots = start;
    let mut t = 0.0;
    let mut h: f64 = 1.0 / 32.0;
    while t < 1.0 {
        if h < 1e-9 {
            return None;
        }
        let t1 = (t + h).min(1.0);
        let c = xi0_polynomial(target, &point(t1));
        let Some(next) = aberth(&c, roots, 80) else {
            h /= 2.0;
            continue;
        };
        let spread = 1.0 + roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
        let consistent = (0..4).all(|k| {
            let moved = (next[k] - roots[k]).norm();
            (0..4).filter(|&j| j != k).all(|j| {
                let gap = (roots[j] - roots[k]).norm();
                gap < 1e-6 * spread || moved < 0.3 * gap
            })
        });
        if consistent {
            roots = next;
            t = t1;
            h = (h * 1.5).min(0.125);
        } else {
            h /= 2.0;
        }
    }
    Some(roots)
}

fn root_pairing_seeds(target: &[f64; 35], samples: usize, rng: &mut ChaCha8Rng) -> Vec<SVector<f64, 20>> {
    let samples = samples.max(6);
    let points: Vec<Vector3<f64>> = (0..samples)
        .map(|_| Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0)))
        .collect();
    let base = points[0];
    let Some(base_roots) = roots_from_scratch(&xi0_polynomial(target, &base.map(|v| C64::new(v, 0.0)).into())) else {
        return Vec::new();
    };
    let mut tracked = vec![base_roots];
    for p in &points[1..] {
        let detour = Vector3::from_fn(|_, _| rng.random_range(-0.5..0.5)) * (p - base).norm().max(0.1);
        match track_roots(target, &base, p, &detour, base_roots) {
            Some(r) => tracked.push(r),
            None => return Vec::new(),
        }
    }
    let lead = target[0];

    // design matrices for the ξ0-linear and ξ0-free parts of a monic factor
    let lin = DMatrix::from_fn(samples, 3, |k, i| points[k][i]);
    let quad_terms = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
    let quad = DMatrix::from_fn(samples, 6, |k, t| points[k][quad_terms[t].0] * points[k][quad_terms[t].1]);
    let lin_svd = lin.clone().svd(true, true);
    let quad_svd = quad.clone().svd(true, true);

    let mut seeds = Vec::new();
    for (pa, pb) in PAIRINGS {
        let fit = |pair: [usize; 2]| -> Option<[f64; 10]> {
            // monic factor ξ0² − s ξ0 + p at every sample
            let s = DVector::from_fn(samples, |k, _| -(tracked[k][pair[0]] + tracked[k][pair[1]]));
            let p = DVector::from_fn(samples, |k, _| tracked[k][pair[0]] * tracked[k][pair[1]]);
            let solve = |svd: &nalgebra::SVD<f64, nalgebra::Dyn, nalgebra::Dyn>, rhs: &DVector<C64>| {
                let re = svd.solve(&rhs.map(|v| v.re), 1e-12).ok()?;
                let im = svd.solve(&rhs.map(|v| v.im), 1e-12).ok()?;
                Some((re, im))
            };
            let (s_re, s_im) = solve(&lin_svd, &s)?;
            let (p_re, p_im) = solve(&quad_svd, &p)?;
            let size = 1.0 + s_re.amax().max(p_re.amax());
            if s_im.amax().max(p_im.amax()) > 1e-4 * size {
                return None; // factor would need complex coefficients
            }
            let fit_err = (&lin * &s_re - s.map(|v| v.re)).amax().max((&quad * &p_re - p.map(|v| v.re)).amax());
            if fit_err > 1e-3 * size {
                return None; // pairing is inconsistent across samples
            }
            let mut out = [0.0; 10];
            out[0] = 1.0;
            out[1..4].copy_from_slice(s_re.as_slice());
            out[4..10].copy_from_slice(p_re.as_slice());
            Some(out)
        };
        let (Some(a), Some(b)) = (fit(pa), fit(pb)) else { continue };
        let na = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut x = SVector::<f64, 20>::zeros();
        for p in 0..10 {
            x[p] = a[p] / na;
            x[10 + p] = b[p] * lead * na;
        }
        seeds.push(x);
    }
    seeds
}

/// Slot of the `ξ0⁴` monomial; kept public for callers that inspect leading terms.
pub fn leading_slot() -> usize {
    multi_index_slot([0, 0, 0, 0])
}
