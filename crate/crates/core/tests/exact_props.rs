//! Property tests for the exact linear-algebra substrate: normal-form
//! reconstruction identities, canonical-form shape, saturation and index
//! arithmetic on random small matrices.

use cst_core::exact::{
    hnf, int, lattice_meet_join, quotient_structure, snf, Int, LatticeBasis, MatZ,
};
use num::{One, Signed, Zero};
use proptest::prelude::*;

/// Random matrix with the given shape and single-digit entries.
fn mat_strategy(rows: usize, cols: usize) -> impl Strategy<Value = MatZ> {
    proptest::collection::vec(-9i64..=9, rows * cols).prop_map(move |entries| {
        MatZ::from_fn(rows, cols, |i, j| int(entries[i * cols + j]))
    })
}

fn shapes() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=4, 1usize..=4)
}

fn product(factors: &[Int]) -> Int {
    factors.iter().fold(Int::one(), |acc, f| acc * f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn snf_reconstructs_exactly((rows, cols) in shapes().prop_flat_map(|(r, c)| (Just(r), Just(c))),
                                seed in any::<u64>()) {
        // derive a deterministic matrix from the seed to keep shrinking sane
        let m = MatZ::from_fn(rows, cols, |i, j| {
            let h = seed.wrapping_mul(6364136223846793005).wrapping_add((i * 31 + j * 17) as u64);
            int(((h >> 33) % 19) as i64 - 9)
        });
        let (d, u, v) = snf(&m);
        prop_assert_eq!(u.mul(&m).mul(&v), d.clone());
        prop_assert_eq!(u.det().abs(), int(1));
        prop_assert_eq!(v.det().abs(), int(1));
        // diagonal, nonnegative, divisibility chain
        prop_assert!(d.is_diagonal());
        let k = rows.min(cols);
        for t in 0..k {
            prop_assert!(!d.at(t, t).is_negative());
            if t > 0 && !d.at(t, t).is_zero() {
                prop_assert!(!d.at(t - 1, t - 1).is_zero());
                prop_assert!((d.at(t, t) % d.at(t - 1, t - 1)).is_zero());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn hnf_reconstructs_and_is_canonical(m in shapes().prop_flat_map(|(r, c)| mat_strategy(r, c))) {
        let (h, u) = hnf(&m);
        prop_assert_eq!(m.mul(&u), h.clone());
        prop_assert_eq!(u.det().abs(), int(1));
        // canonical column HNF shape: strictly increasing pivot rows, positive
        // pivots, entries left of a pivot reduced into [0, pivot), zero
        // columns at the right
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero_col = false;
        for j in 0..h.cols() {
            let pivot_row = (0..h.rows()).find(|&i| !h.at(i, j).is_zero());
            match pivot_row {
                None => seen_zero_col = true,
                Some(p) => {
                    prop_assert!(!seen_zero_col, "zero column before a nonzero one");
                    if let Some(lp) = last_pivot {
                        prop_assert!(p > lp, "pivot rows must strictly increase");
                    }
                    last_pivot = Some(p);
                    prop_assert!(h.at(p, j).is_positive());
                    for left in 0..j {
                        prop_assert!(!h.at(p, left).is_negative());
                        prop_assert!(h.at(p, left) < h.at(p, j));
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn saturation_identities(m in (1usize..=4).prop_flat_map(|d| mat_strategy(d, d))) {
        let lattice = LatticeBasis::from_cols_matrix(&m);
        prop_assume!(!lattice.is_empty());
        let sat = lattice.saturate();
        // idempotence and span preservation
        prop_assert_eq!(sat.saturate(), sat.clone());
        prop_assert!(sat.contains_lattice(&lattice));
        prop_assert_eq!(sat.rank(), lattice.rank());
        // index equals the product of the invariant factors of the basis
        let index = lattice.index_in(&sat).unwrap();
        let (d, _, _) = snf(lattice.basis_matrix());
        let mut expected = Int::one();
        for t in 0..lattice.rank() {
            expected *= d.at(t, t);
        }
        prop_assert_eq!(index, expected.abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn quotient_counts_match_determinant(
        m in (1usize..=3).prop_flat_map(|d| mat_strategy(d, d))
    ) {
        prop_assume!(!m.det().is_zero());
        let small = LatticeBasis::from_cols_matrix(&m);
        let big = LatticeBasis::standard(m.rows());
        let (factors, reps) = quotient_structure(&big, &small).unwrap();
        let index = small.index_in(&big).unwrap();
        prop_assert_eq!(product(&factors), index.clone());
        prop_assert_eq!(int(reps.len() as i64), index);
        // representatives are canonical and pairwise distinct
        for rep in &reps {
            for c in rep {
                prop_assert!(!c.is_negative() && c < &num::BigRational::one());
            }
        }
        let mut dedup = reps.clone();
        dedup.sort();
        dedup.dedup();
        prop_assert_eq!(dedup.len(), reps.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn meet_join_modular_identity(
        a in (2usize..=3).prop_flat_map(|d| (mat_strategy(d, d), mat_strategy(d, d)))
    ) {
        let (m1, m2) = a;
        prop_assume!(!m1.det().is_zero() && !m2.det().is_zero());
        let l1 = LatticeBasis::from_cols_matrix(&m1);
        let l2 = LatticeBasis::from_cols_matrix(&m2);
        let (sum, meet) = lattice_meet_join(&l1, &l2).unwrap();
        // both orders of composing the indices measure [sum : meet]
        let lhs = l1.index_in(&sum).unwrap() * meet.index_in(&l1).unwrap();
        let rhs = l2.index_in(&sum).unwrap() * meet.index_in(&l2).unwrap();
        prop_assert_eq!(lhs, rhs);
        // sanity: sum contains both, both contain meet
        prop_assert!(sum.contains_lattice(&l1) && sum.contains_lattice(&l2));
        prop_assert!(l1.contains_lattice(&meet) && l2.contains_lattice(&meet));
    }
}
