use fiberscope::linalg::{
    cokernel_invariants, matrix_order, rank_bareiss, rank_multimodular, smith_normal_form, IntegerMatrix, MatrixOrder,
};
use fiberscope::oracle::brute_force_cokernel;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = IntegerMatrix> {
    (1usize..8, 1usize..8).prop_flat_map(|(r, c)| {
        prop::collection::vec(-6i64..=6, r * c).prop_map(move |v| {
            IntegerMatrix::from_entries(r, c, v.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_decomposition(a in matrix()) {
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert!(s.u.determinant().abs().is_one());
        prop_assert!(s.v.determinant().abs().is_one());
        for w in s.invariant_factors.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert!(s.invariant_factors.iter().all(|d| d.is_positive()));
    }

    #[test]
    fn ranks_agree(a in matrix()) {
        let r = rank_bareiss(&a);
        prop_assert_eq!(r, rank_multimodular(&a));
        prop_assert_eq!(r, smith_normal_form(&a).rank());
    }

    #[test]
    fn cokernel_matches_enumeration(a in matrix()) {
        if let Some(b) = brute_force_cokernel(&a, 20_000) {
            prop_assert_eq!(cokernel_invariants(&a), b);
        }
    }
}

#[test]
fn order_of_rotations() {
    let r = IntegerMatrix::from_rows(&[[0, -1], [1, 0]]);
    assert_eq!(matrix_order(&r, 100), MatrixOrder::Finite(4));
    let r6 = IntegerMatrix::from_rows(&[[1, -1], [1, 0]]);
    assert_eq!(matrix_order(&r6, 100), MatrixOrder::Finite(6));
    assert!(matches!(matrix_order(&IntegerMatrix::from_rows(&[[2, 1], [1, 1]]), 100), MatrixOrder::Infinite(_)));
    assert!(matches!(matrix_order(&IntegerMatrix::from_rows(&[[1, 1], [0, 1]]), 100), MatrixOrder::Infinite(_)));
}
