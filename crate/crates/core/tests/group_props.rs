//! Property tests for the group engine: the Schreier orbit–stabilizer
//! path must agree element-for-element with brute force, the counting
//! identity |orbit|·|stabilizer| = |G| must hold, and pseudoreflection
//! structure must transport along conjugation.

use proptest::prelude::*;

use cst_core::exact::int;
use cst_core::groups::{
    affine_fixed_points, fixed_locus_data, is_pseudoreflection, AffineElement, Caps,
    FiniteMatrixGroup, LinearElement,
};
use cst_core::torus::TorsionPoint;

/// Signed permutation matrix on Z⁴ from a permutation index and sign bits.
fn signed_perm(perm_index: usize, signs: u8) -> LinearElement {
    let mut items = vec![0usize, 1, 2, 3];
    let mut perm = Vec::new();
    let mut k = perm_index % 24;
    for f in (1..=4usize).rev() {
        let fact: usize = (1..f).product();
        let pos = k / fact;
        k %= fact;
        perm.push(items.remove(pos));
    }
    let mut rows = vec![vec![0i64; 4]; 4];
    for (j, &i) in perm.iter().enumerate() {
        rows[i][j] = if signs & (1 << j) != 0 { -1 } else { 1 };
    }
    LinearElement::from_i64_rows(&rows).expect("signed permutations are unimodular")
}

fn arb_element() -> impl Strategy<Value = LinearElement> {
    (0usize..24, 0u8..16).prop_map(|(p, s)| signed_perm(p, s))
}

fn arb_point() -> impl Strategy<Value = TorsionPoint> {
    (2i64..=12, proptest::collection::vec(0i64..12, 4))
        .prop_map(|(den, nums)| TorsionPoint::from_i64(den, &nums))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schreier_stabilizer_matches_brute_force(
        g1 in arb_element(),
        g2 in arb_element(),
        x in arb_point(),
    ) {
        let caps = Caps::default();
        let group = FiniteMatrixGroup::new(4, vec![g1, g2]).unwrap();
        let order = group.order(&caps).unwrap();
        let (orbit_len, stab) = group.orbit_stabilizer(&x, &caps).unwrap();
        prop_assert_eq!(orbit_len as u64 * stab.order(&caps).unwrap(), order);
        let brute = group.brute_force_stabilizer(&x, &caps).unwrap();
        prop_assert_eq!(stab.close(&caps).unwrap(), brute.close(&caps).unwrap());
    }

    #[test]
    fn action_is_a_homomorphism(
        g1 in arb_element(),
        g2 in arb_element(),
        x in arb_point(),
    ) {
        prop_assert_eq!(x.apply(&g2).apply(&g1), x.apply(&g1.mul(&g2)));
        prop_assert_eq!(x.apply(&g1).apply(&g1.inverse()), x);
    }

    #[test]
    fn conjugation_transports_reflection_structure(
        g in arb_element(),
        h in arb_element(),
    ) {
        let report = is_pseudoreflection(&g);
        let conj = h.mul(&g).mul(&h.inverse());
        let conj_report = is_pseudoreflection(&conj);
        prop_assert_eq!(report.is_pseudoreflection, conj_report.is_pseudoreflection);
        prop_assert_eq!(report.order, conj_report.order);
        if let (Some(line), Some(conj_line)) = (report.root_line, conj_report.root_line) {
            // the conjugate's root line is the image of the original's
            let hm = h.to_matz();
            let image_gens: Vec<Vec<cst_core::exact::Int>> =
                line.vectors().iter().map(|v| hm.mul_vec(v)).collect();
            let image = cst_core::exact::LatticeBasis::from_generators(4, &image_gens);
            prop_assert_eq!(image, conj_line);
        }
    }

    #[test]
    fn fixed_locus_points_are_fixed_and_counted(
        g in arb_element(),
        t in arb_point(),
    ) {
        let a = AffineElement::new(t, g).unwrap();
        match fixed_locus_data(&a, 4096) {
            None => {
                // free action: no point of a modest torsion level is fixed
                prop_assert!(affine_fixed_points(&a).is_none());
            }
            Some((reps, direction, count)) => {
                prop_assert!(count > int(0));
                for r in &reps {
                    prop_assert_eq!(a.apply(r), r.clone());
                }
                if count <= int(4096) {
                    prop_assert_eq!(int(reps.len() as i64), count);
                    // representatives lie on pairwise distinct components:
                    // differences of distinct reps never lie in direction + Z^d
                    let mut sorted = reps.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    prop_assert_eq!(sorted.len(), reps.len());
                }
                prop_assert_eq!(
                    direction.rank(),
                    4 - cst_core::exact::MatZ::identity(4)
                        .sub(&a.linear().to_matz())
                        .rank()
                );
            }
        }
    }

    #[test]
    fn affine_inverse_and_associativity(
        g1 in arb_element(),
        g2 in arb_element(),
        t1 in arb_point(),
        t2 in arb_point(),
        x in arb_point(),
    ) {
        let a = AffineElement::new(t1, g1).unwrap();
        let b = AffineElement::new(t2, g2).unwrap();
        prop_assert_eq!(a.compose(&b).apply(&x), a.apply(&b.apply(&x)));
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert!(a.inverse().compose(&a).is_identity());
    }
}
