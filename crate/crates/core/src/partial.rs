//! The auxiliary derivation ∂ = -a4·∂/∂b12 - a8·∂/∂b16 - a10·∂/∂b18 on the
//! commutative subalgebra S, the named cocycles built from it, and the
//! identities linking ∂ to the differential.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{multiply, Element, Gen, Letter, Monomial};
use crate::differential::Differential;
use crate::expr::{evaluate, raw_generator, FormalExpr};
use crate::gf3::F3;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartialError {
    #[error("element has a term with a nonempty odd word: {0}")]
    NotPolynomial(String),
}

/// `∂` on one exponent vector.
pub fn partial_exps(p: &[u32; 6]) -> Vec<([u32; 6], F3)> {
    let mut out = Vec::with_capacity(3);
    for j in 0..3 {
        let e = p[3 + j];
        let c = -F3::new(e as i64);
        if c.is_zero() {
            continue;
        }
        let mut q = *p;
        q[3 + j] -= 1;
        q[j] += 1;
        out.push((q, c));
    }
    out
}

/// An element of S = F3[a4, a8, a10, b12, b16, b18].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolyElement(Element);

impl PolyElement {
    pub fn new(e: Element) -> Result<Self, PartialError> {
        if let Some((m, _)) = e.terms().find(|(m, _)| !m.is_poly()) {
            return Err(PartialError::NotPolynomial(m.to_string()));
        }
        Ok(PolyElement(e))
    }

    pub fn parse(src: &str) -> Option<Self> {
        let expr = FormalExpr::parse(src).ok()?;
        let e = evaluate(&expr, &raw_generator).ok()?;
        PolyElement::new(e).ok()
    }

    pub fn monomial(exps: [u32; 6]) -> Self {
        PolyElement(Element::from_monomial(Monomial::poly(exps)))
    }

    pub fn element(&self) -> &Element {
        &self.0
    }

    pub fn into_element(self) -> Element {
        self.0
    }

    pub fn mul(&self, other: &PolyElement) -> PolyElement {
        PolyElement(multiply(&self.0, &other.0))
    }

    pub fn neg(&self) -> PolyElement {
        PolyElement(-&self.0)
    }
}

impl fmt::Display for PolyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn partial(q: &PolyElement) -> PolyElement {
    let mut out = Element::zero();
    for (m, c) in q.0.terms() {
        for (e, k) in partial_exps(&m.exps) {
            out.add_term(c * k, Monomial::poly(e));
        }
    }
    PolyElement(out)
}

pub fn partial2(q: &PolyElement) -> PolyElement {
    partial(&partial(q))
}

/// Named cocycles.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NamedGen {
    A4,
    A8,
    A9,
    A10,
    X26,
    X36,
    X48,
    X54,
    Y20,
    Y21,
    Y22,
    Y25,
    Y26,
    Y27,
    Y58,
    Y60,
    Y64,
    Y76,
}

impl NamedGen {
    pub const ALL: [NamedGen; 18] = [
        NamedGen::A4,
        NamedGen::A8,
        NamedGen::A9,
        NamedGen::A10,
        NamedGen::X26,
        NamedGen::X36,
        NamedGen::X48,
        NamedGen::X54,
        NamedGen::Y20,
        NamedGen::Y21,
        NamedGen::Y22,
        NamedGen::Y25,
        NamedGen::Y26,
        NamedGen::Y27,
        NamedGen::Y58,
        NamedGen::Y60,
        NamedGen::Y64,
        NamedGen::Y76,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedGen::A4 => "a4",
            NamedGen::A8 => "a8",
            NamedGen::A9 => "a9",
            NamedGen::A10 => "a10",
            NamedGen::X26 => "x26",
            NamedGen::X36 => "x36",
            NamedGen::X48 => "x48",
            NamedGen::X54 => "x54",
            NamedGen::Y20 => "y20",
            NamedGen::Y21 => "y21",
            NamedGen::Y22 => "y22",
            NamedGen::Y25 => "y25",
            NamedGen::Y26 => "y26",
            NamedGen::Y27 => "y27",
            NamedGen::Y58 => "y58",
            NamedGen::Y60 => "y60",
            NamedGen::Y64 => "y64",
            NamedGen::Y76 => "y76",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.name() == s)
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn degree(self) -> u32 {
        self.name()[1..].parse().expect("numeric subscript")
    }

    /// Lives in the commutative subalgebra S.
    pub fn is_poly(self) -> bool {
        !matches!(
            self,
            NamedGen::A9 | NamedGen::X26 | NamedGen::Y21 | NamedGen::Y25 | NamedGen::Y27
        )
    }
}

impl Serialize for NamedGen {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// One ±1 per named generator.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignTable {
    negated: u32,
}

impl Default for SignTable {
    fn default() -> Self {
        SignTable { negated: 0 }
    }
}

impl SignTable {
    pub fn from_mask(mask: u32) -> Self {
        SignTable {
            negated: mask & ((1 << 18) - 1),
        }
    }

    pub fn mask(&self) -> u32 {
        self.negated
    }

    pub fn is_negated(&self, g: NamedGen) -> bool {
        self.negated >> g.index() & 1 == 1
    }

    pub fn sign(&self, g: NamedGen) -> F3 {
        if self.is_negated(g) {
            -F3::ONE
        } else {
            F3::ONE
        }
    }

    pub fn with_negated(mut self, g: NamedGen) -> Self {
        self.negated |= 1 << g.index();
        self
    }

    pub fn flipped(&self) -> Vec<NamedGen> {
        NamedGen::ALL.into_iter().filter(|&g| self.is_negated(g)).collect()
    }

    pub fn flip_count(&self) -> u32 {
        self.negated.count_ones()
    }
}

impl Serialize for SignTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<&str, i64> = NamedGen::ALL
            .iter()
            .map(|&g| (g.name(), self.sign(g).signed()))
            .collect();
        map.serialize(s)
    }
}

fn poly(src: &str) -> Element {
    PolyElement::parse(src).expect("fixed formula").into_element()
}

fn word_times_poly(letter: Letter, p: &Element) -> Element {
    multiply(&Element::generator(letter.generator()), p)
}

/// Unsigned representatives; x26 is supplied by the convention audit.
#[derive(Clone, Debug)]
pub struct NamedGenerators {
    base: Vec<Element>,
    pub signs: SignTable,
}

impl NamedGenerators {
    pub fn new(x26: Element, signs: SignTable) -> Self {
        let d2 = |s: &str| partial2(&PolyElement::parse(s).expect("fixed")).into_element();
        let y_odd = |b: &str, a: &str| {
            let mut e = word_times_poly(Letter::A9, &poly(b));
            e.add_scaled(-F3::ONE, &word_times_poly(Letter::C17, &poly(a)));
            e
        };
        let base = NamedGen::ALL
            .iter()
            .map(|g| match g {
                NamedGen::A4 => Element::generator(Gen::A4),
                NamedGen::A8 => Element::generator(Gen::A8),
                NamedGen::A9 => Element::generator(Gen::A9),
                NamedGen::A10 => Element::generator(Gen::A10),
                NamedGen::X26 => x26.clone(),
                NamedGen::X36 => poly("b12^3"),
                NamedGen::X48 => poly("b16^3"),
                NamedGen::X54 => poly("b18^3"),
                NamedGen::Y20 => poly("a8 b12 - a4 b16"),
                NamedGen::Y22 => poly("a4 b18 - a10 b12"),
                NamedGen::Y26 => poly("a8 b18 - a10 b16"),
                NamedGen::Y58 => d2("b12^2 b16^2 b18"),
                NamedGen::Y60 => d2("b12^2 b16 b18^2"),
                NamedGen::Y64 => d2("b12 b16^2 b18^2"),
                NamedGen::Y76 => d2("b12^2 b16^2 b18^2"),
                NamedGen::Y21 => y_odd("b12", "a4"),
                NamedGen::Y25 => y_odd("b16", "a8"),
                NamedGen::Y27 => y_odd("b18", "a10"),
            })
            .collect();
        NamedGenerators { base, signs }
    }

    /// Representatives with the audited x26 and all signs +1.
    pub fn standard() -> Self {
        let (x26, _) = crate::differential::x26_by_kernel(&Differential::default())
            .expect("x26 kernel is one-dimensional");
        Self::new(x26, SignTable::default())
    }

    pub fn with_signs(&self, signs: SignTable) -> Self {
        NamedGenerators {
            base: self.base.clone(),
            signs,
        }
    }

    pub fn base(&self, g: NamedGen) -> &Element {
        &self.base[g.index()]
    }

    pub fn rep(&self, g: NamedGen) -> Element {
        self.base(g).scale(self.signs.sign(g))
    }

    /// Named generators first, then the raw algebra generators.
    pub fn resolve(&self, symbol: &str) -> Option<Element> {
        NamedGen::from_name(symbol)
            .map(|g| self.rep(g))
            .or_else(|| raw_generator(symbol))
    }

    pub fn eval(&self, src: &str) -> Element {
        let e = FormalExpr::parse(src).expect("valid expression");
        evaluate(&e, &|s| self.resolve(s)).expect("known symbols")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
    pub residual: String,
}

impl IdentityCheck {
    fn new(name: &str, lhs: &Element, rhs: &Element) -> Self {
        let r = lhs - rhs;
        IdentityCheck {
            name: name.to_string(),
            holds: r.is_zero(),
            residual: r.to_string(),
        }
    }
}

fn times_poly(x: &Element, p: &PolyElement) -> Element {
    multiply(x, p.element())
}

/// x26·∂²(-Q) = d(a9·Q + c17·∂Q).
pub fn verify_identity_38(q: &PolyElement, gens: &NamedGenerators, d: &Differential) -> IdentityCheck {
    let lhs = times_poly(&gens.rep(NamedGen::X26), &partial2(&q.neg()));
    let inner = &word_times_poly(Letter::A9, q.element())
        + &word_times_poly(Letter::C17, partial(q).element());
    IdentityCheck::new("x26·∂²(-Q) = d(a9 Q + c17 ∂Q)", &lhs, &d.apply(&inner))
}

/// The five coboundary witnesses built from ∂Q and ∂²Q.
pub fn verify_lemma41(q: &PolyElement, gens: &NamedGenerators, d: &Differential) -> Vec<IdentityCheck> {
    let dq = partial(q);
    let d2q = partial2(q);
    let raw = |g: Gen| Element::generator(g);
    let mut out = Vec::new();
    out.push(IdentityCheck::new(
        "a9·∂²Q = d(∂Q)",
        &times_poly(&gens.rep(NamedGen::A9), &d2q),
        &d.apply(dq.element()),
    ));
    for (y, a, b) in [
        (NamedGen::Y21, Gen::A4, Gen::B12),
        (NamedGen::Y25, Gen::A8, Gen::B16),
        (NamedGen::Y27, Gen::A10, Gen::B18),
    ] {
        let w = &multiply(&raw(a), q.element()) + &multiply(&raw(b), dq.element());
        out.push(IdentityCheck::new(
            &format!("{}·∂²Q = d({} Q + {} ∂Q)", y.name(), a.name(), b.name()),
            &times_poly(&gens.rep(y), &d2q),
            &d.apply(&w),
        ));
    }
    let w = -(&word_times_poly(Letter::A9, q.element()) + &word_times_poly(Letter::C17, dq.element()));
    out.push(IdentityCheck::new(
        "x26·∂²Q = d(-(a9 Q + c17 ∂Q))",
        &times_poly(&gens.rep(NamedGen::X26), &d2q),
        &d.apply(&w),
    ));
    out
}

/// One displayed row: Q, its first derivative, then the forms shown for ∂²Q.
#[derive(Clone, Debug)]
pub struct TableRow {
    pub q: String,
    pub first: String,
    pub second: Vec<String>,
}

pub fn table40_rows() -> Vec<TableRow> {
    include_str!("../data/table40.txt")
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let cols: Vec<&str> = l.split('|').map(str::trim).collect();
            TableRow {
                q: cols[0].to_string(),
                first: cols[1].to_string(),
                second: cols[2].split(';').map(|s| s.trim().to_string()).collect(),
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Exact,
    Negated,
    /// Equal once the listed generators are negated.
    AfterFlips { flips: Vec<NamedGen> },
    Mismatch,
}

impl Verdict {
    pub fn is_exact(&self) -> bool {
        matches!(self, Verdict::Exact)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpressionVerdict {
    pub column: &'static str,
    pub displayed: String,
    pub expanded_form: bool,
    pub verdict: Verdict,
    pub displayed_value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRowReport {
    pub q: String,
    pub machine_first: String,
    pub machine_second: String,
    pub expressions: Vec<ExpressionVerdict>,
    /// Common sign (+1 or -1) under which every expanded form matches.
    pub row_sign: Option<i64>,
}

fn classify(displayed: &FormalExpr, machine: &Element, gens: &NamedGenerators) -> (Verdict, Element) {
    let value = evaluate(displayed, &|s| gens.resolve(s)).expect("table symbols");
    if value == *machine {
        return (Verdict::Exact, value);
    }
    if value == -machine {
        return (Verdict::Negated, value);
    }
    let named: Vec<NamedGen> = displayed
        .symbols()
        .iter()
        .filter_map(|s| NamedGen::from_name(s))
        .collect();
    let mut masks: Vec<u32> = (1..(1u32 << named.len())).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for mask in masks {
        let mut signs = gens.signs;
        for (i, g) in named.iter().enumerate() {
            if mask >> i & 1 == 1 {
                signs = signs.with_negated(*g);
            }
        }
        let flipped = gens.with_signs(signs);
        let v = evaluate(displayed, &|s| flipped.resolve(s)).expect("table symbols");
        if v == *machine {
            let flips = named
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, g)| *g)
                .collect();
            return (Verdict::AfterFlips { flips }, value);
        }
    }
    (Verdict::Mismatch, value)
}

pub fn table40_report(gens: &NamedGenerators) -> Vec<TableRowReport> {
    table40_rows()
        .par_iter()
        .map(|row| {
            let q = PolyElement::parse(&row.q).expect("table row Q");
            let first = partial(&q).into_element();
            let second = partial2(&q).into_element();
            let mut expressions = Vec::new();
            let mut push = |column: &'static str, src: &str, machine: &Element, expanded: bool| {
                let expr = FormalExpr::parse(src).expect("table expression");
                let (verdict, value) = classify(&expr, machine, gens);
                expressions.push(ExpressionVerdict {
                    column,
                    displayed: src.to_string(),
                    expanded_form: expanded,
                    verdict,
                    displayed_value: value.to_string(),
                });
            };
            push("first", &row.first, &first, true);
            let last = row.second.len() - 1;
            for (i, s) in row.second.iter().enumerate() {
                push("second", s, &second, i == last);
            }
            let expanded: Vec<&Verdict> = expressions
                .iter()
                .filter(|e| e.expanded_form)
                .map(|e| &e.verdict)
                .collect();
            let row_sign = if expanded.iter().all(|v| **v == Verdict::Exact) {
                Some(1)
            } else if expanded.iter().all(|v| **v == Verdict::Negated) {
                Some(-1)
            } else {
                None
            };
            TableRowReport {
                q: row.q.clone(),
                machine_first: first.to_string(),
                machine_second: second.to_string(),
                expressions,
                row_sign,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PolyElement {
        PolyElement::parse(s).unwrap()
    }

    #[test]
    fn partial_on_generators() {
        assert_eq!(partial(&p("b16")), p("-a8"));
        assert!(partial(&p("a4")).element().is_zero());
        assert!(partial(&p("b12^3")).element().is_zero());
    }

    #[test]
    fn partial2_examples() {
        assert_eq!(partial2(&p("b12 b16")), p("-a4 a8"));
        assert_eq!(partial2(&p("b16 b18^2")), p("a8 a10 b18 - a10^2 b16"));
        assert!(partial2(&p("b12^3")).element().is_zero());
    }

    #[test]
    fn rejects_words() {
        assert!(PolyElement::new(Element::generator(Gen::A9)).is_err());
    }

    #[test]
    fn named_representatives() {
        let g = NamedGenerators::standard();
        assert_eq!(g.rep(NamedGen::Y20), poly("a8 b12 - a4 b16"));
        assert_eq!(g.rep(NamedGen::X36), poly("b12^3"));
        assert_eq!(
            g.rep(NamedGen::Y58),
            poly("-a4^2 b16^2 b18 - a4 a8 b12 b16 b18 + a4 a10 b12 b16^2 - a8^2 b12^2 b18 + a8 a10 b12^2 b16")
        );
        for n in NamedGen::ALL {
            assert_eq!(g.rep(n).degree(), Some(n.degree()), "{}", n.name());
            assert!(Differential::default().apply(&g.rep(n)).is_zero(), "{}", n.name());
        }
    }

    #[test]
    fn identity_38_samples() {
        let g = NamedGenerators::standard();
        let d = Differential::default();
        for q in ["b12", "b12^2", "b12 b16 b18"] {
            assert!(verify_identity_38(&p(q), &g, &d).holds, "{q}");
        }
        // the displayed difference a9 c17 - c17 a9 does not satisfy it
        let minus = &g.eval("a9 c17") - &g.eval("c17 a9");
        let alt = NamedGenerators::new(minus, SignTable::default());
        assert!(!verify_identity_38(&p("b12^2"), &alt, &d).holds);
    }

    #[test]
    fn lemma41_samples() {
        let g = NamedGenerators::standard();
        let d = Differential::default();
        for q in ["b12^2", "b16 b18", "a4"] {
            for check in verify_lemma41(&p(q), &g, &d) {
                assert!(check.holds, "{q}: {} residual {}", check.name, check.residual);
            }
        }
    }

    #[test]
    fn table_row_b12b16b18() {
        let g = NamedGenerators::standard();
        let report = table40_report(&g);
        assert_eq!(report.len(), 26);
        let row = report.iter().find(|r| r.q == "b12 b16 b18").unwrap();
        assert_eq!(row.row_sign, Some(1));
        let y_forms: Vec<&ExpressionVerdict> = row
            .expressions
            .iter()
            .filter(|e| e.column == "second" && !e.expanded_form)
            .collect();
        assert_eq!(y_forms.len(), 3);
        assert!(y_forms.iter().any(|e| !e.verdict.is_exact()));
    }
}
