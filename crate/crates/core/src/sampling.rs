//! Seeded random draws of media, metrics, parameters and coordinate changes.

use nalgebra::{Complex, Matrix4, Matrix6, SymmetricEigen, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::wedge_pairing;
use crate::medium::MediumTensor;
use crate::metaclass::MetaclassParams;
use crate::segre::Metaclass;

type C64 = Complex<f64>;

/// Independent stream number `index` of a seeded generator, so batch draws
/// do not depend on evaluation order.
pub fn draw_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Box–Muller standard normal draw.
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.random_range(f64::EPSILON..1.0);
    let v: f64 = rng.random();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

pub fn gaussian_matrix4<R: Rng + ?Sized>(rng: &mut R) -> Matrix4<f64> {
    Matrix4::from_fn(|_, _| standard_normal(rng))
}

pub fn condition_number(m: &Matrix4<f64>) -> f64 {
    let sv = m.singular_values();
    sv.max() / sv.min()
}

/// A random orthogonal matrix (Haar measure).
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Matrix4<f64> {
    let qr = gaussian_matrix4(rng).qr();
    let (q, r) = (qr.q(), qr.r());
    let d = Matrix4::from_diagonal(&Vector4::from_fn(|i, _| if r[(i, i)] < 0.0 { -1.0 } else { 1.0 }));
    q * d
}

/// A random invertible matrix with condition number below `max_cond`.
pub fn random_well_conditioned<R: Rng + ?Sized>(rng: &mut R, max_cond: f64) -> Matrix4<f64> {
    loop {
        let scale = rng.random_range(0.5..2.0);
        let t = (Matrix4::identity() + gaussian_matrix4(rng) * 0.5) * scale;
        if condition_number(&t) < max_cond {
            return t;
        }
    }
}

/// A random symmetric matrix of signature (1, 3) or (3, 1).
pub fn random_lorentz_metric<R: Rng + ?Sized>(rng: &mut R) -> Matrix4<f64> {
    let p = random_well_conditioned(rng, 8.0);
    let eta = Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0));
    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    p.transpose() * eta * p * sign
}

/// A random symmetric 4×4 matrix of the given rank (1..=4).
pub fn random_symmetric_of_rank<R: Rng + ?Sized>(rng: &mut R, rank: usize) -> Matrix4<f64> {
    let q = random_rotation(rng);
    let d = Vector4::from_fn(|i, _| {
        if i < rank {
            let mag = rng.random_range(0.3..2.0);
            if rng.random_bool(0.5) {
                mag
            } else {
                -mag
            }
        } else {
            0.0
        }
    });
    q * Matrix4::from_diagonal(&d) * q.transpose()
}

/// A random skewon-free medium `J6·S` with `S` symmetric.
pub fn random_skewon_free<R: Rng + ?Sized>(rng: &mut R) -> MediumTensor {
    let g = Matrix6::from_fn(|_, _| standard_normal(rng));
    let s = (g + g.transpose()) * 0.5;
    MediumTensor::from_matrix(wedge_pairing() * s)
}

/// Eigenvalues of a normal form, each listed once per Jordan block.
pub fn nominal_eigenvalues(p: &MetaclassParams) -> Vec<C64> {
    let a = |i: usize| p.alpha[i - 1];
    let b = |i: usize| p.beta[i - 1];
    let pair = |re: f64, im: f64| [C64::new(re, im), C64::new(re, -im)];
    let mut out = Vec::new();
    match p.class {
        Metaclass::I => (1..=3).for_each(|i| out.extend(pair(a(i), b(i)))),
        Metaclass::II => {
            out.extend(pair(a(1), b(1)));
            out.extend(pair(a(2), b(2)));
        }
        Metaclass::III => out.extend(pair(a(1), b(1))),
        Metaclass::IV => {
            out.extend(pair(a(1), b(1)));
            out.extend(pair(a(2), b(2)));
            out.extend([C64::new(a(3) + a(4), 0.0), C64::new(a(3) - a(4), 0.0)]);
        }
        Metaclass::V => {
            out.extend(pair(a(1), b(1)));
            out.extend([C64::new(a(2) + a(3), 0.0), C64::new(a(2) - a(3), 0.0)]);
        }
        Metaclass::VI => {
            out.extend(pair(a(1), b(1)));
            out.extend([a(2) + a(4), a(2) - a(4), a(3) + a(5), a(3) - a(5)].map(|x| C64::new(x, 0.0)));
        }
        Metaclass::VII => (1..=3).for_each(|i| out.extend([C64::new(a(i) + a(i + 3), 0.0), C64::new(a(i) - a(i + 3), 0.0)])),
        Metaclass::VIIIToXXIII => {}
    }
    out
}

/// Distinct nominal eigenvalues at least `gap` apart and away from zero.
fn well_separated(p: &MetaclassParams, gap: f64) -> bool {
    let ev = nominal_eigenvalues(p);
    ev.iter().all(|z| z.norm() >= gap) && ev.iter().enumerate().all(|(i, x)| ev[i + 1..].iter().all(|y| (x - y).norm() >= gap))
}

fn signed<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let v = rng.random_range(lo..hi);
    if rng.random_bool(0.5) {
        v
    } else {
        -v
    }
}

/// Generic valid parameters: distinct eigenvalues, invertible medium, and
/// the nonzero couplings each class assumes.
pub fn random_generic_params<R: Rng + ?Sized>(rng: &mut R, class: Metaclass) -> MetaclassParams {
    let (na, nb) = MetaclassParams::arity(class).expect("normal-form class");
    loop {
        let alpha: Vec<f64> = (0..na).map(|_| rng.random_range(-2.0..2.0)).collect();
        let beta: Vec<f64> = (0..nb).map(|_| rng.random_range(0.3..2.0)).collect();
        let p = MetaclassParams { class, alpha, beta };
        let couplings_ok = match class {
            Metaclass::V => p.alpha[2].abs() >= 0.2,
            Metaclass::VI => p.alpha[3].abs() >= 0.2 && p.alpha[4].abs() >= 0.2,
            Metaclass::VII => p.alpha[3..].iter().all(|v| v.abs() >= 0.2),
            _ => true,
        };
        if couplings_ok && well_separated(&p, 0.15) {
            return p;
        }
    }
}

/// Parameters of classes I, II or IV satisfying the double-light-cone
/// conditions, with the two cones kept apart.
pub fn random_birefringent_params<R: Rng + ?Sized>(rng: &mut R, class: Metaclass) -> MetaclassParams {
    loop {
        let p = match class {
            Metaclass::I => {
                let i = rng.random_range(0..3usize);
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                let mut alpha = [0.0; 3];
                let mut beta = [0.0; 3];
                alpha[i] = rng.random_range(-2.0..2.0);
                beta[i] = rng.random_range(0.3..2.0);
                alpha[j] = rng.random_range(-2.0..2.0);
                alpha[k] = alpha[j];
                beta[j] = rng.random_range(0.3..2.0);
                beta[k] = beta[j];
                MetaclassParams { class, alpha: alpha.to_vec(), beta: beta.to_vec() }
            }
            Metaclass::II => {
                let a = rng.random_range(-2.0..2.0);
                let b = rng.random_range(0.2..4.0);
                MetaclassParams { class, alpha: vec![a, a], beta: vec![b, b] }
            }
            Metaclass::IV => {
                let a = rng.random_range(-2.0..2.0);
                let b = rng.random_range(0.3..2.0);
                let a3 = rng.random_range(-2.0..2.0);
                let a4 = signed(rng, 0.2, 2.0);
                if (a3 * a3 - a4 * a4).abs() < 0.05 {
                    continue;
                }
                MetaclassParams { class, alpha: vec![a, a, a3, a4], beta: vec![b, b] }
            }
            other => panic!("class {other} has no double light cone"),
        };
        if class == Metaclass::I {
            // keep the two cones distinct: the repeated D must exceed 2
            let d = crate::metaclass::d_invariants(&p).expect("valid parameters");
            if [d.d1, d.d2, d.d3].iter().fold(0.0_f64, |m, v| m.max(*v)) < 2.1 {
                continue;
            }
        }
        return p;
    }
}

/// Random Lorentz quadric pair with a random constant.
pub fn random_lorentz_pair<R: Rng + ?Sized>(rng: &mut R) -> (Matrix4<f64>, Matrix4<f64>, f64) {
    let a = random_lorentz_metric(rng);
    let b = random_lorentz_metric(rng);
    let c = signed(rng, 0.2, 5.0);
    (a, b, c)
}

/// Whether a symmetric matrix has all eigenvalues of magnitude at least `tol·max|λ|`.
pub fn is_nondegenerate(q: &Matrix4<f64>, tol: f64) -> bool {
    let eig = SymmetricEigen::new(*q).eigenvalues;
    let max = eig.amax();
    eig.iter().all(|l| l.abs() >= tol * max)
}
