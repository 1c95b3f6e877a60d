use proptest::prelude::*;

use cotor_core::gf3::{ColumnSpace, ImageSolution, SparseMatrixF3, SparseVector, F3};

fn matrix() -> impl Strategy<Value = SparseMatrixF3> {
    (1usize..18, 1usize..18).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(prop_oneof![4 => Just(0i64), 1 => Just(1), 1 => Just(2)], c), r)
            .prop_map(|rows| SparseMatrixF3::from_rows(&rows))
    })
}

proptest! {
    #[test]
    fn rank_nullity(m in matrix()) {
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.len(), m.n_cols());
        prop_assert_eq!(m.rank(), m.transpose().rank());
        for v in &k {
            prop_assert!(m.mul_vec(v).unwrap().is_zero());
        }
    }

    #[test]
    fn rref_is_idempotent(m in matrix()) {
        let r = m.rref();
        prop_assert!(r.matrix.is_rref());
        prop_assert_eq!(r.matrix.rref().matrix, r.matrix.clone());
        prop_assert_eq!(r.rank, m.rank());
    }

    #[test]
    fn solve_roundtrip(m in matrix(), seed in prop::collection::vec(0i64..3, 18)) {
        let x = SparseVector::from_dense(&seed[..m.n_cols()].iter().map(|&c| F3::new(c)).collect::<Vec<_>>());
        let b = m.mul_vec(&x).unwrap();
        match m.solve_in_image(&b).unwrap() {
            ImageSolution::InImage(y) => prop_assert_eq!(m.mul_vec(&y).unwrap(), b),
            ImageSolution::NotInImage { .. } => prop_assert!(false, "image vector rejected"),
        }
    }

    #[test]
    fn column_space_agrees_with_rref(m in matrix()) {
        let space = ColumnSpace::new(m.n_rows(), m.columns().to_vec(), true);
        prop_assert_eq!(space.rank(), m.rank());
        prop_assert_eq!(space.kernel().len(), m.n_cols() - m.rank());
    }

    #[test]
    fn text_roundtrip(m in matrix()) {
        let back = SparseMatrixF3::from_text(&m.to_text()).unwrap();
        prop_assert_eq!(back, m);
    }
}
