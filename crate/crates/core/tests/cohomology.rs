use proptest::prelude::*;

use cotor_core::cohomology::{check_basis, poincare_coeffs, theorem21_basis, Complex, Decomposer, Side};
use cotor_core::gf3::ColumnSpace;
use cotor_core::{Differential, Element, NamedGenerators};

fn complex() -> &'static Complex {
    static CX: std::sync::OnceLock<Complex> = std::sync::OnceLock::new();
    CX.get_or_init(|| Complex::new(50, Differential::default()))
}

#[test]
fn homology_matches_series() {
    let dims: Vec<i64> = complex().homology_dims().iter().map(|&d| d as i64).collect();
    assert_eq!(dims, poincare_coeffs(50));
}

#[test]
fn enumerated_basis_is_a_basis() {
    let gens = NamedGenerators::standard();
    for n in 0..=50 {
        let classes = theorem21_basis(n, &gens);
        assert!(check_basis(complex(), n, &classes).passed(), "degree {n}");
    }
}

#[test]
fn d_side_starts_in_degree_nine() {
    let gens = NamedGenerators::standard();
    let first_d = (0..=50)
        .find(|&n| theorem21_basis(n, &gens).iter().any(|c| c.side == Side::D))
        .unwrap();
    assert_eq!(first_d, 9);
}

#[test]
fn non_cocycles_are_rejected() {
    let gens = NamedGenerators::standard();
    let dec = Decomposer::new(complex(), 12, theorem21_basis(12, &gens)).unwrap();
    assert!(dec.decompose(&gens.eval("b12")).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decompositions_reconstruct(n in 0u32..=50, pick in any::<u64>()) {
        let cx = complex();
        let gens = NamedGenerators::standard();
        let space = ColumnSpace::new(cx.basis(n + 1).dim(), cx.matrix(n).columns().to_vec(), true);
        let kernel = space.kernel();
        prop_assume!(!kernel.is_empty());
        let mut v = kernel[(pick % kernel.len() as u64) as usize].clone();
        v.add_scaled(cotor_core::F3::TWO, &kernel[((pick >> 8) % kernel.len() as u64) as usize]);
        let z = Element::from_vector(&v, cx.basis(n));
        let dec = Decomposer::new(cx, n, theorem21_basis(n, &gens)).unwrap();
        let out = dec.decompose(&z).unwrap();
        prop_assert_eq!(out.reconstruct(&dec.classes, &cx.differential), z);
    }
}
