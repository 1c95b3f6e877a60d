use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cotor_core::algebra::{multiply, random_homogeneous, DegreeBasis};
use cotor_core::differential::{d_leibniz, SignConvention};
use cotor_core::{Differential, Element, FiltrationScheme};

fn element(seed: u64, max_degree: u32) -> Element {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = (seed % (max_degree as u64 + 1)) as u32;
    random_homogeneous(&mut rng, &DegreeBasis::new(n), 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn associativity(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (x, y, z) = (element(a, 30), element(b, 30), element(c, 30));
        prop_assert_eq!(multiply(&multiply(&x, &y), &z), multiply(&x, &multiply(&y, &z)));
    }

    #[test]
    fn degrees_and_weights_add(a in any::<u64>(), b in any::<u64>()) {
        let (x, y) = (element(a, 30), element(b, 30));
        let xy = multiply(&x, &y);
        if !xy.is_zero() {
            prop_assert_eq!(xy.degree().unwrap(), x.degree().unwrap() + y.degree().unwrap());
        }
        for s in FiltrationScheme::ALL {
            for (m, _) in xy.terms() {
                let lo = x.terms().map(|(m, _)| m.weight(s)).min().unwrap()
                    + y.terms().map(|(m, _)| m.weight(s)).min().unwrap();
                prop_assert!(m.weight(s) >= lo);
            }
        }
    }

    #[test]
    fn differential_squares_to_zero(a in any::<u64>()) {
        let d = Differential::default();
        let x = element(a, 50);
        prop_assert!(d.apply(&d.apply(&x)).is_zero());
    }

    #[test]
    fn closed_form_is_leibniz(a in any::<u64>()) {
        let x = element(a, 50);
        prop_assert_eq!(Differential::default().apply(&x), d_leibniz(SignConvention::TotalDegreeParity, &x));
    }

    #[test]
    fn image_has_no_pure_polynomial_terms(a in any::<u64>()) {
        let dx = Differential::default().apply(&element(a, 60));
        prop_assert!(dx.terms().all(|(m, _)| !m.is_poly()));
    }

    #[test]
    fn filtration_is_preserved(a in any::<u64>()) {
        let x = element(a, 40);
        let dx = Differential::default().apply(&x);
        for s in FiltrationScheme::ALL {
            if let (Some(w), false) = (x.weight(s), dx.is_zero()) {
                prop_assert!(dx.terms().all(|(m, _)| m.weight(s) >= w));
            }
        }
    }
}
