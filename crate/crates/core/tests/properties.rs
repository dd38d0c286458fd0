use birelab::fresnel::tamm_rubilar;
use birelab::medium::MediumTensor;
use birelab::sampling::{condition_number, random_well_conditioned};
use birelab::segre::segre_type;
use nalgebra::{Matrix4, Matrix6};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matrix6() -> impl Strategy<Value = Matrix6<f64>> {
    prop::collection::vec(-3.0..3.0f64, 36).prop_map(|v| Matrix6::from_row_slice(&v))
}

fn jacobian(max_cond: f64) -> impl Strategy<Value = Matrix4<f64>> {
    any::<u64>().prop_map(move |seed| random_well_conditioned(&mut ChaCha8Rng::seed_from_u64(seed), max_cond))
}

fn lorentz_metric() -> impl Strategy<Value = Matrix4<f64>> {
    any::<u64>().prop_map(|seed| birelab::sampling::random_lorentz_metric(&mut ChaCha8Rng::seed_from_u64(seed)))
}

fn nondegenerate_metric() -> impl Strategy<Value = Matrix4<f64>> {
    (any::<u64>(), prop::collection::vec(prop_oneof![-2.0..-0.3f64, 0.3..2.0f64], 4)).prop_map(|(seed, d)| {
        let q = birelab::sampling::random_rotation(&mut ChaCha8Rng::seed_from_u64(seed));
        q * Matrix4::from_diagonal(&nalgebra::Vector4::from_vec(d)) * q.transpose()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn component_round_trip_is_exact(m in matrix6()) {
        let k = MediumTensor::from_matrix(m);
        prop_assert_eq!(MediumTensor::from_components(&k.to_components()).unwrap(), k);
    }

    #[test]
    fn decomposition_sums_back(m in matrix6()) {
        let k = MediumTensor::from_matrix(m);
        let d = k.decompose();
        let sum = d.principal.matrix() + d.skewon.matrix() + Matrix6::identity() * d.axion;
        prop_assert!((sum - m).norm() <= 1e-14 * m.norm());
        prop_assert!(d.principal.is_skewon_free(1e-12));
        prop_assert!(d.principal.matrix().trace().abs() <= 1e-12 * m.norm());
    }

    #[test]
    fn pullback_composes(m in matrix6(), s in jacobian(1e3), t in jacobian(1e3)) {
        let k = MediumTensor::from_matrix(m);
        let stepwise = k.pullback(&t).unwrap().pullback(&s).unwrap();
        let direct = k.pullback(&(s * t)).unwrap();
        let scale = stepwise.matrix().norm().max(m.norm());
        prop_assert!((stepwise.matrix() - direct.matrix()).norm() <= 1e-10 * scale);
    }

    #[test]
    fn quartic_is_cubic_in_the_medium(m in matrix6(), c in -4.0..4.0f64) {
        let k = MediumTensor::from_matrix(m);
        let lhs = tamm_rubilar(&k.scaled(c));
        let rhs = tamm_rubilar(&k).scaled(c * c * c);
        prop_assert!(lhs.distance(&rhs) <= 1e-12 * rhs.norm());
    }

    #[test]
    fn density_transform_matches_pullback(m in matrix6(), t in jacobian(1e3)) {
        let k = MediumTensor::from_matrix(m);
        let lhs = tamm_rubilar(&k).transform_density(&t).unwrap();
        let rhs = tamm_rubilar(&k.pullback(&t).unwrap());
        prop_assert!(lhs.distance(&rhs) <= 1e-9 * rhs.norm(), "cond {}", condition_number(&t));
    }

    #[test]
    fn segre_blocks_partition_six(m in matrix6()) {
        if let Ok(t) = segre_type(&m) {
            prop_assert_eq!(t.total_dimension(), 6);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn hodge_star_is_skewon_free(g in nondegenerate_metric()) {
        prop_assert!(MediumTensor::hodge_star(&g).unwrap().is_skewon_free(1e-9));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn hodge_quartic_vanishes_on_the_light_cone(g in lorentz_metric(), seed in any::<u64>()) {
        let f = tamm_rubilar(&MediumTensor::hodge_star(&g).unwrap());
        let ginv = g.try_inverse().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // null covectors by solving the quadratic along a random line through a timelike covector
        let eig = nalgebra::SymmetricEigen::new(ginv);
        let lone = (0..4).find(|&i| {
            let s = eig.eigenvalues[i] > 0.0;
            eig.eigenvalues.iter().filter(|l| (**l > 0.0) == s).count() == 1
        }).unwrap();
        for _ in 0..100 {
            let mut y = nalgebra::Vector4::from_fn(|_, _| birelab::sampling::standard_normal(&mut rng));
            let rest: f64 = (0..4).filter(|&i| i != lone).map(|i| eig.eigenvalues[i].abs() * y[i] * y[i]).sum();
            y[lone] = (rest / eig.eigenvalues[lone].abs()).sqrt();
            let xi = eig.eigenvectors * y;
            prop_assert!((xi.transpose() * ginv * xi)[0].abs() <= 1e-10 * xi.norm_squared() * ginv.norm());
            prop_assert!(f.evaluate(&xi).abs() <= 1e-9 * f.norm() * xi.norm_squared().powi(2));
        }
        // and off the cone it does not vanish
        let timelike = eig.eigenvectors.column(lone).into_owned();
        prop_assert!(f.evaluate(&timelike).abs() > 1e-6 * f.norm());
    }
}

/// `|p ∧ q| / (|p| |q|)` for the 5-vectors of binary-quartic coefficients.
fn binary_skew(p: &[f64; 5], q: &[f64; 5]) -> f64 {
    let mut w = 0.0_f64;
    for i in 0..5 {
        for j in i + 1..5 {
            w = w.max((p[i] * q[j] - p[j] * q[i]).abs());
        }
    }
    let n = |v: &[f64; 5]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    w / (n(p) * n(q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Zero sets are compared on random planes through the origin: the two
    // surfaces agree there iff the restricted binary quartics are proportional.
    #[test]
    fn surface_is_invariant_under_scaling_and_inversion(seed in any::<u64>(), c in prop_oneof![-5.0..-0.2f64, 0.2..5.0f64]) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = birelab::sampling::random_skewon_free(&mut rng);
        let inv = match k.matrix().try_inverse() {
            Some(m) if m.norm() < 1e6 => MediumTensor::from_matrix(m),
            _ => return Ok(()),
        };
        let f = tamm_rubilar(&k);
        let others = [tamm_rubilar(&k.scaled(c)), tamm_rubilar(&inv)];
        for _ in 0..20 {
            let u = nalgebra::Vector4::from_fn(|_, _| birelab::sampling::standard_normal(&mut rng));
            let v = nalgebra::Vector4::from_fn(|_, _| birelab::sampling::standard_normal(&mut rng));
            let p = f.restrict_to_plane(&u, &v).unwrap();
            for g in &others {
                prop_assert!(binary_skew(&p, &g.restrict_to_plane(&u, &v).unwrap()) < 1e-8);
            }
        }
    }
}
