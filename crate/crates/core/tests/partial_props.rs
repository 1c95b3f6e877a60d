use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cotor_core::algebra::{random_homogeneous, DegreeBasis};
use cotor_core::partial::{partial, partial2, table40_report, verify_identity_38, verify_lemma41};
use cotor_core::{Differential, NamedGenerators, PolyElement};

fn poly(seed: u64, max_degree: u32) -> PolyElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = (seed % (max_degree as u64 + 1)) as u32;
    PolyElement::new(random_homogeneous(&mut rng, &DegreeBasis::poly_only(n), 5)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_is_a_derivation(a in any::<u64>(), b in any::<u64>()) {
        let (p, q) = (poly(a, 40), poly(b, 40));
        let lhs = partial(&p.mul(&q)).into_element();
        let rhs = &partial(&p).mul(&q).into_element() + &p.mul(&partial(&q)).into_element();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn partial_cubed_vanishes(a in any::<u64>()) {
        let q = poly(a, 70);
        prop_assert!(partial(&partial2(&q)).element().is_zero());
    }

    #[test]
    fn coboundary_identities(a in any::<u64>()) {
        let q = poly(a, 44);
        let gens = NamedGenerators::standard();
        let d = Differential::default();
        prop_assert!(verify_identity_38(&q, &gens, &d).holds);
        for c in verify_lemma41(&q, &gens, &d) {
            prop_assert!(c.holds, "{}: {}", c.name, c.residual);
        }
    }
}

#[test]
fn every_table_row_matches_with_plus_sign() {
    let rows = table40_report(&NamedGenerators::standard());
    assert_eq!(rows.len(), 26);
    for r in &rows {
        assert_eq!(r.row_sign, Some(1), "row {}", r.q);
    }
}
