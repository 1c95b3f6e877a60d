mod common;

use cotor_core::cohomology::Complex;
use cotor_core::spectral::{
    e_infinity_by_subspaces, jump_survey, monotonicity_violations, page_equality_check, Page, SpectralEngine,
};
use cotor_core::{Differential, FiltrationScheme};

fn complex(n: u32) -> Complex {
    Complex::new(n, Differential::default())
}

#[test]
fn weight_e4_matches_direct_sum() {
    let cx = complex(60);
    let eng = SpectralEngine::new(&cx, FiltrationScheme::WeightS3, 60);
    let e4 = eng.page(Page::Finite(4)).totals();
    let oracle = common::weight_e4_series(60);
    assert_eq!(e4, oracle);
}

#[test]
fn may_e1_small_degrees() {
    let cx = complex(20);
    let eng = SpectralEngine::new(&cx, FiltrationScheme::MayS5, 20);
    let e1 = eng.page(Page::Finite(1));
    assert_eq!(e1.total(8), 2);
    assert_eq!(e1.total(9), 1);
    let oracle = common::free_series(
        &[
            common::poly(26, 3),
            common::poly(4, 1),
            common::poly(8, 1),
            common::poly(10, 1),
            common::ext(9, 1),
            common::poly(12, 1),
            common::poly(16, 1),
            common::poly(18, 1),
        ],
        20,
    );
    assert_eq!(e1.totals(), oracle);
}

#[test]
fn pages_shrink_and_converge() {
    let cx = complex(40);
    for scheme in FiltrationScheme::ALL {
        let eng = SpectralEngine::new(&cx, scheme, 40);
        assert!(monotonicity_violations(&eng, 9).is_empty(), "{scheme:?}");
        let inf = eng.page(Page::Infinity);
        assert_eq!(inf.totals(), cx.homology_dims()[..=40].to_vec());
        assert!(page_equality_check(&eng, Page::Finite(5), Page::Finite(5)).passed());
        assert_eq!(SpectralEngine::compatibility_violations(&cx, scheme, 40), 0);
    }
}

#[test]
fn weight_differentials_live_on_pages_three_and_six() {
    let cx = complex(60);
    let eng = SpectralEngine::new(&cx, FiltrationScheme::WeightS3, 60);
    let survey = jump_survey(&cx, &eng);
    assert_eq!(survey.nonzero_pages, vec![3, 6]);
    assert_eq!(eng.collapsed_at(), 7);
    assert!(survey.min_jump.unwrap() >= 0);
}

#[test]
fn may_collapses_at_three() {
    let cx = complex(60);
    let eng = SpectralEngine::new(&cx, FiltrationScheme::MayS5, 60);
    assert!(eng.collapsed_at() <= 3);
}

#[test]
fn infinity_page_by_two_routes() {
    let cx = complex(36);
    let eng = SpectralEngine::new(&cx, FiltrationScheme::WeightS3, 36);
    let inf = eng.page(Page::Infinity);
    for n in 0..=36 {
        let direct = e_infinity_by_subspaces(&cx, FiltrationScheme::WeightS3, n);
        let from_table: Vec<usize> = (0..direct.len()).map(|p| inf.get(p as i64, n)).collect();
        assert_eq!(from_table, direct, "degree {n}");
    }
}
