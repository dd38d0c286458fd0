//! Index conventions shared by every module.
//!
//! Two-forms are expanded in the ordered basis `O = {01, 02, 03, 23, 31, 12}`.
//! The position of a pair in [`PAIRS`] is the bijection `b` (zero-based here).
//! Changing this table changes every sign downstream.

use nalgebra::{Matrix4, Matrix6};

/// The ordered index pairs of `O`.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2)];

/// Fully antisymmetric raw components `raw[i][j][l][m]` of a (2,2)-tensor,
/// upper indices first.
pub type RawComponents = [[[[f64; 4]; 4]; 4]; 4];

/// Slot of the ordered pair `(i, j)` in `O` together with the sign relating
/// `dx^i ∧ dx^j` to the basis element. `None` when `i == j`.
pub fn pair_slot(i: usize, j: usize) -> Option<(usize, f64)> {
    PAIRS.iter().enumerate().find_map(|(slot, &(a, b))| {
        if (a, b) == (i, j) {
            Some((slot, 1.0))
        } else if (a, b) == (j, i) {
            Some((slot, -1.0))
        } else {
            None
        }
    })
}

/// Levi-Civita permutation symbol on four indices.
pub fn levi_civita(idx: [usize; 4]) -> i32 {
    let mut sign = 1;
    for a in 0..4 {
        for b in (a + 1)..4 {
            match idx[a].cmp(&idx[b]) {
                std::cmp::Ordering::Equal => return 0,
                std::cmp::Ordering::Greater => sign = -sign,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    sign
}

const fn build_permutations() -> [[usize; 4]; 24] {
    let mut out = [[0usize; 4]; 24];
    let mut n = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                if a != b && a != c && b != c && a + b + c >= 3 {
                    let d = 6 - a - b - c;
                    if d < 4 && d != a && d != b && d != c {
                        out[n] = [a, b, c, d];
                        n += 1;
                    }
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
}

/// All 24 orderings of `(0, 1, 2, 3)`, in lexicographic order.
pub const PERMUTATIONS4: [[usize; 4]; 24] = build_permutations();

/// The wedge pairing on two-forms in basis `O`: `u ∧ v = uᵀ J6 v · dx^0123`.
pub fn wedge_pairing() -> Matrix6<f64> {
    let mut j = Matrix6::zeros();
    for k in 0..3 {
        j[(k, k + 3)] = 1.0;
        j[(k + 3, k)] = 1.0;
    }
    j
}

/// Second compound matrix of `t` in basis `O`: entry `(I, K)` is the 2×2 minor
/// of `t` with rows `I` and columns `K`.
pub fn second_compound(t: &Matrix4<f64>) -> Matrix6<f64> {
    Matrix6::from_fn(|r, c| {
        let (i1, i2) = PAIRS[r];
        let (k1, k2) = PAIRS[c];
        t[(i1, k1)] * t[(i2, k2)] - t[(i1, k2)] * t[(i2, k1)]
    })
}

/// Largest absolute entry, used as a scale for relative tolerances.
pub(crate) fn max_abs<const R: usize, const C: usize>(m: &nalgebra::SMatrix<f64, R, C>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levi_civita_signs() {
        assert_eq!(levi_civita([0, 1, 2, 3]), 1);
        assert_eq!(levi_civita([1, 0, 2, 3]), -1);
        assert_eq!(levi_civita([2, 3, 0, 1]), 1);
        assert_eq!(levi_civita([0, 2, 3, 1]), 1);
        assert_eq!(levi_civita([0, 0, 2, 3]), 0);
    }

    #[test]
    fn permutation_table_is_complete() {
        let mut seen = std::collections::HashSet::new();
        for p in PERMUTATIONS4 {
            assert_ne!(levi_civita(p), 0);
            assert!(seen.insert(p));
        }
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn wedge_pairing_matches_exterior_products() {
        // dx^I ∧ dx^J = ε_{I1 I2 J1 J2} dx^0123
        let j6 = wedge_pairing();
        for (r, &(a, b)) in PAIRS.iter().enumerate() {
            for (c, &(d, e)) in PAIRS.iter().enumerate() {
                assert_eq!(j6[(r, c)], f64::from(levi_civita([a, b, d, e])));
            }
        }
        assert_eq!(j6 * j6, Matrix6::identity());
        assert_eq!(j6, j6.transpose());
    }

    #[test]
    fn pair_slot_signs() {
        assert_eq!(pair_slot(3, 1), Some((4, 1.0)));
        assert_eq!(pair_slot(1, 3), Some((4, -1.0)));
        assert_eq!(pair_slot(2, 2), None);
    }

    #[test]
    fn compound_is_multiplicative() {
        let s = Matrix4::new(1.0, 2.0, 0.5, 0.0, 0.0, 1.0, 3.0, 1.0, 2.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 2.0);
        let t = Matrix4::new(0.0, 1.0, 0.0, 2.0, 1.0, 0.0, 1.0, 0.0, 0.5, 0.5, 2.0, 1.0, 0.0, 3.0, 1.0, 1.0);
        let lhs = second_compound(&(s * t));
        let rhs = second_compound(&s) * second_compound(&t);
        assert!((lhs - rhs).norm() < 1e-12);
    }
}
