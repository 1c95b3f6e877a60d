//! Acceptance gate: one PASS/FAIL line per criterion.
//! Run with `cargo test -p cotor-core --test acceptance`.

mod common;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cotor_core::algebra::{multiply, random_homogeneous, DegreeBasis};
use cotor_core::cohomology::{check_basis, poincare_coeffs, theorem21_basis, Complex, Decomposer};
use cotor_core::differential::{audit_conventions, AuditConfig, Differential};
use cotor_core::gf3::{ColumnSpace, SparseMatrixF3};
use cotor_core::partial::{
    partial, partial2, table40_report, verify_identity_38, NamedGen, NamedGenerators, PolyElement, Verdict,
};
use cotor_core::relations::{ideal_and_split_check, relation_catalog, verify_catalog, Group};
use cotor_core::spectral::{collapse_check, page_equality_check, Page, SpectralEngine};
use cotor_core::FiltrationScheme;

const TOP: u32 = 80;
const SPECTRAL_TOP: u32 = 60;

struct Ctx {
    complex: Complex,
    gens: NamedGenerators,
}

type Outcome = (bool, String);

fn criterion1(cx: &Ctx) -> Outcome {
    let dims = cx.complex.homology_dims();
    let expected = poincare_coeffs(TOP);
    let bad: Vec<u32> = (0..=TOP)
        .filter(|&n| dims[n as usize] as i64 != expected[n as usize])
        .collect();
    (bad.is_empty(), format!("degrees 0..={TOP}, mismatches at {bad:?}"))
}

fn criterion2(cx: &Ctx) -> Outcome {
    let audit = match audit_conventions(&AuditConfig::default()) {
        Ok(a) => a,
        Err(e) => return (false, e.to_string()),
    };
    let admissible: Vec<&str> = audit
        .candidates
        .iter()
        .filter(|c| c.admissible)
        .map(|c| c.convention.name())
        .collect();
    let cat = relation_catalog();
    let witnesses: Vec<_> = cat.iter().filter(|r| r.witness.is_some()).cloned().collect();
    let summary = verify_catalog(&witnesses, &witnesses, &cx.gens, &Differential::new(audit.selected), None);
    (
        !admissible.is_empty() && audit.closed_form_agrees && summary.search.consistent,
        format!(
            "admissible {admissible:?}, selected {}, x26 coefficients {:?}, witness lists reconciled: {} ({}/{} under signs {:?})",
            audit.selected.name(),
            audit.x26_coefficients,
            summary.search.consistent,
            summary.search.witness_passes,
            summary.search.witness_checks,
            summary.search.flipped
        ),
    )
}

fn criterion3(cx: &Ctx) -> Outcome {
    let d = &cx.complex.differential;
    let bad: Vec<&str> = NamedGen::ALL
        .iter()
        .filter(|g| !d.apply(&cx.gens.rep(**g)).is_zero())
        .map(|g| g.name())
        .collect();
    (bad.is_empty(), format!("18 generators, non-cocycles {bad:?}"))
}

fn criterion4(cx: &Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let bases: Vec<DegreeBasis> = (0..=60).map(DegreeBasis::poly_only).collect();
    let mut derivation_ok = true;
    for _ in 0..300 {
        let (i, j) = (rng.gen_range(0..=30), rng.gen_range(0..=30));
        let p = PolyElement::new(random_homogeneous(&mut rng, &bases[i], 4)).unwrap();
        let q = PolyElement::new(random_homogeneous(&mut rng, &bases[j], 4)).unwrap();
        let lhs = partial(&p.mul(&q));
        let rhs = &partial(&p).mul(&q).into_element() + &p.mul(&partial(&q)).into_element();
        derivation_ok &= *lhs.element() == rhs;
    }
    let cube_ok = bases.iter().flat_map(|b| &b.monomials).all(|m| {
        let q = PolyElement::monomial(m.exps);
        partial(&partial2(&q)).element().is_zero()
    });
    let d = &cx.complex.differential;
    let mut id38 = 0;
    let id38_ok = bases[..=40].iter().flat_map(|b| &b.monomials).all(|m| {
        id38 += 1;
        verify_identity_38(&PolyElement::monomial(m.exps), &cx.gens, d).holds
    });
    let rows = table40_report(&cx.gens);
    let unsigned: Vec<&str> = rows.iter().filter(|r| r.row_sign.is_none()).map(|r| r.q.as_str()).collect();
    let errata = rows
        .iter()
        .flat_map(|r| &r.expressions)
        .filter(|e| !e.expanded_form && e.verdict != Verdict::Exact)
        .count();
    (
        derivation_ok && cube_ok && id38_ok && unsigned.is_empty(),
        format!(
            "derivation {derivation_ok}, ∂³=0 to 60 {cube_ok}, identity on {id38} monomials {id38_ok}, {} rows, unsigned {unsigned:?}, errata entries {errata}",
            rows.len()
        ),
    )
}

fn criterion5(cx: &Ctx) -> Outcome {
    let cat = relation_catalog();
    let summary = verify_catalog(&cat, &cat, &cx.gens, &cx.complex.differential, Some(&cx.complex));
    let s = &summary.search;
    let group_i_exact = summary
        .records
        .iter()
        .filter(|r| r.group == Group::I && r.residual == "0")
        .count();
    (
        summary.all_pass(),
        format!(
            "witnesses {}/{} under flips {:?}, failing {:?}, group i exact {group_i_exact}/35, errata {}, unresolved {:?}",
            s.witness_passes,
            s.witness_checks,
            s.flipped,
            s.failing_witnesses,
            summary.errata.len(),
            summary.unresolved
        ),
    )
}

fn criterion6(cx: &Ctx) -> Outcome {
    let bad: Vec<u32> = (0..=TOP)
        .filter(|&n| !check_basis(&cx.complex, n, &theorem21_basis(n, &cx.gens)).passed())
        .collect();
    (bad.is_empty(), format!("degrees 0..={TOP}, failing {bad:?}"))
}

fn criterion7(cx: &Ctx) -> Outcome {
    let r = ideal_and_split_check(&cx.complex, &cx.gens, TOP);
    (
        r.passed(),
        format!(
            "{} ideal products, {} failures; {} C-side products, {} failures",
            r.ideal_products,
            r.ideal_failures.len(),
            r.split_products,
            r.split_failures.len()
        ),
    )
}

fn criterion8(cx: &Ctx) -> Outcome {
    let may = SpectralEngine::new(&cx.complex, FiltrationScheme::MayS5, SPECTRAL_TOP);
    let e1 = may.page(Page::Finite(1));
    let oracle = common::may_e1_bigraded(SPECTRAL_TOP);
    let e1_bad = (0..=SPECTRAL_TOP)
        .filter(|&n| {
            let width = e1.dims[n as usize].len().max(oracle[n as usize].len());
            (0..width).any(|p| e1.get(p as i64, n) != oracle[n as usize].get(p).copied().unwrap_or(0))
        })
        .count();
    let may_collapse = collapse_check(&may, 3);

    let w = SpectralEngine::new(&cx.complex, FiltrationScheme::WeightS3, SPECTRAL_TOP);
    let e13 = page_equality_check(&w, Page::Finite(1), Page::Finite(3));
    let e46 = page_equality_check(&w, Page::Finite(4), Page::Finite(6));
    let e7 = collapse_check(&w, 7);
    let inf = w.page(Page::Infinity);
    let h = cx.complex.homology_dims();
    let conv = (0..=SPECTRAL_TOP).all(|n| inf.total(n) == h[n as usize]);
    let ok = e1_bad == 0 && may_collapse.passed() && e13.passed() && e46.passed() && e7.passed() && conv;
    (
        ok,
        format!(
            "may: E1 oracle mismatched degrees {e1_bad}, E3=E∞ mismatches {}; weight: E1=E3 {}, E4=E6 {}, E7=E∞ {}, ΣE∞=H {conv}",
            may_collapse.mismatches.len(),
            e13.mismatches.len(),
            e46.mismatches.len(),
            e7.mismatches.len()
        ),
    )
}

fn criterion9(cx: &Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut rank_nullity = true;
    for _ in 0..200 {
        let (r, c) = (rng.gen_range(1..25), rng.gen_range(1..25));
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..c).map(|_| if rng.gen_bool(0.3) { rng.gen_range(1..3) } else { 0 }).collect())
            .collect();
        let m = SparseMatrixF3::from_rows(&rows);
        let k = m.kernel_basis();
        rank_nullity &= m.rank() + k.len() == c && m.rank() == m.transpose().rank();
        rank_nullity &= k.iter().all(|v| m.mul_vec(v).unwrap().is_zero());
    }

    let bases: Vec<DegreeBasis> = (0..=24).map(DegreeBasis::new).collect();
    let mut assoc = true;
    let mut additive = true;
    for _ in 0..300 {
        let pick = |rng: &mut ChaCha8Rng| {
            let n = rng.gen_range(0..=24);
            random_homogeneous(rng, &bases[n], 3)
        };
        let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        assoc &= multiply(&multiply(&x, &y), &z) == multiply(&x, &multiply(&y, &z));
        let xy = multiply(&x, &y);
        if !xy.is_zero() && !x.is_zero() && !y.is_zero() {
            additive &= xy.degree() == Some(x.degree().unwrap() + y.degree().unwrap());
        }
    }

    let purity = (0..=TOP).all(|n| {
        let tgt = cx.complex.basis(n + 1);
        cx.complex
            .matrix(n)
            .columns()
            .iter()
            .all(|col| col.entries().iter().all(|(i, _)| !tgt.monomials[*i].is_poly()))
    });

    let mut reconstruct = true;
    for n in [17u32, 26, 30, 35, 43] {
        let dec = Decomposer::new(&cx.complex, n, theorem21_basis(n, &cx.gens)).unwrap();
        let space = ColumnSpace::new(
            cx.complex.basis(n + 1).dim(),
            cx.complex.matrix(n).columns().to_vec(),
            true,
        );
        for v in space.kernel().iter().take(12) {
            let z = cotor_core::Element::from_vector(v, cx.complex.basis(n));
            let out = dec.decompose(&z).unwrap();
            reconstruct &= out.reconstruct(&dec.classes, &cx.complex.differential) == z;
        }
    }
    let ok = rank_nullity && assoc && additive && purity && reconstruct;
    (
        ok,
        format!(
            "rank-nullity {rank_nullity}, associativity {assoc}, degree additivity {additive}, image purity to {TOP} {purity}, reconstruction {reconstruct}"
        ),
    )
}

fn main() {
    let start = Instant::now();
    let ctx = Ctx {
        complex: Complex::new(TOP, Differential::default()),
        gens: NamedGenerators::standard(),
    };
    eprintln!("complex to degree {TOP} built in {:.1?}", start.elapsed());
    let criteria: [(&str, fn(&Ctx) -> Outcome); 9] = [
        ("dimension oracle", criterion1),
        ("convention audit", criterion2),
        ("cocycle suite", criterion3),
        ("derivation suite", criterion4),
        ("relation suite", criterion5),
        ("additive basis", criterion6),
        ("ideal and splitting", criterion7),
        ("spectral claims", criterion8),
        ("property floor", criterion9),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, detail) = f(&ctx);
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {} ({name}): {} [{:.1?}] {detail}",
            k + 1,
            if ok { "PASS" } else { "FAIL" },
            t.elapsed()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
