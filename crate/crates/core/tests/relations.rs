use cotor_core::cohomology::Complex;
use cotor_core::expr::FormalExpr;
use cotor_core::relations::{
    discover_relation, errata_entry, global_sign_search, local_check, relation_catalog, verify_relation,
    verify_witness, Group, RelationVerdict,
};
use cotor_core::{Differential, NamedGen, NamedGenerators, SignTable};

#[test]
fn group_ii_holds_with_plus_signs() {
    let gens = NamedGenerators::standard();
    let d = Differential::default();
    let cat = relation_catalog();
    let ii: Vec<_> = cat.iter().filter(|r| r.group == Group::II).collect();
    assert_eq!(ii.len(), 10);
    for r in ii {
        assert!(verify_witness(r, &gens, &d).unwrap().pass, "{}", r.id);
    }
}

#[test]
fn family_witnesses_hold_for_every_row() {
    let gens = NamedGenerators::standard();
    let d = Differential::default();
    let fam: Vec<_> = relation_catalog().into_iter().filter(|r| r.id.contains('[')).collect();
    assert_eq!(fam.len(), 130);
    for r in &fam {
        assert!(verify_witness(r, &gens, &d).unwrap().pass, "{}", r.id);
    }
}

#[test]
fn no_sign_table_reconciles_every_witness() {
    let gens = NamedGenerators::standard();
    let d = Differential::default();
    let cat = relation_catalog();
    let checks: Vec<_> = cat
        .iter()
        .filter(|r| r.witness.is_some())
        .map(|r| local_check(r, &gens, &d))
        .collect();
    let search = global_sign_search(&checks);
    assert!(!search.consistent);
    assert!(search.unsatisfiable.is_empty());
    assert_eq!(search.failing_witnesses.len(), 6);
    assert!(search.failing_witnesses.contains(&"iii.1".to_string()));
}

#[test]
fn a9_a4_needs_a_sign_flip() {
    let gens = NamedGenerators::standard();
    let d = Differential::default();
    let r = relation_catalog().into_iter().find(|r| r.id == "iii.1").unwrap();
    assert!(!verify_witness(&r, &gens, &d).unwrap().pass);
    let flipped = gens.with_signs(SignTable::default().with_negated(NamedGen::A4));
    assert!(verify_witness(&r, &flipped, &d).unwrap().pass);
}

#[test]
fn first_group_i_relation_holds_after_one_flip() {
    let gens = NamedGenerators::standard();
    let r = relation_catalog().into_iter().find(|r| r.id == "i.1").unwrap();
    assert_eq!(verify_relation(&r, &gens, None).verdict, RelationVerdict::Fail);
    let e = errata_entry(&r, &gens, None);
    assert!(e.note.starts_with("holds after negating"), "{}", e.note);
    assert_eq!(e.corrected_coeffs, Some(vec![1, -1, -1]));
}

#[test]
fn inhomogeneous_display_is_unresolved() {
    let gens = NamedGenerators::standard();
    let r = relation_catalog().into_iter().find(|r| r.id == "i.29").unwrap();
    let e = errata_entry(&r, &gens, None);
    assert!(e.note.contains("not homogeneous"));
    assert!(e.corrected_coeffs.is_none());
}

#[test]
fn discovery_in_image() {
    let gens = NamedGenerators::standard();
    let cx = Complex::new(32, Differential::default());
    let support = FormalExpr::parse("y21 a8 + a9 y20").unwrap().terms;
    let basis = discover_relation(&support, 29, &gens, Some(&cx)).unwrap();
    assert_eq!(basis, vec![vec![1, 1]]);
}
