//! The algebra V̄: free words in the odd generators a9, c17 on the left,
//! a commutative monomial in a4, a8, a10, b12, b16, b18 on the right.
//!
//! The only non-trivial commutation is b_j·a9 = a9·b_j + c17·a_{j-8}.
//! Every polynomial generator is even, so moving a polynomial across a
//! word never produces a Koszul sign.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::gf3::{SparseVector, F3};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    A9,
    C17,
}

impl Letter {
    pub fn degree(self) -> u32 {
        match self {
            Letter::A9 => 9,
            Letter::C17 => 17,
        }
    }

    pub fn generator(self) -> Gen {
        match self {
            Letter::A9 => Gen::A9,
            Letter::C17 => Gen::C17,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Gen {
    A4,
    A8,
    A10,
    B12,
    B16,
    B18,
    A9,
    C17,
}

pub const POLY_GENS: [Gen; 6] = [Gen::A4, Gen::A8, Gen::A10, Gen::B12, Gen::B16, Gen::B18];
pub const POLY_DEGREES: [u32; 6] = [4, 8, 10, 12, 16, 18];
pub const ALL_GENS: [Gen; 8] = [
    Gen::A4,
    Gen::A8,
    Gen::A10,
    Gen::B12,
    Gen::B16,
    Gen::B18,
    Gen::A9,
    Gen::C17,
];

impl Gen {
    pub fn degree(self) -> u32 {
        match self {
            Gen::A4 => 4,
            Gen::A8 => 8,
            Gen::A10 => 10,
            Gen::B12 => 12,
            Gen::B16 => 16,
            Gen::B18 => 18,
            Gen::A9 => 9,
            Gen::C17 => 17,
        }
    }

    pub fn is_odd(self) -> bool {
        self.degree() % 2 == 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Gen::A4 => "a4",
            Gen::A8 => "a8",
            Gen::A10 => "a10",
            Gen::B12 => "b12",
            Gen::B16 => "b16",
            Gen::B18 => "b18",
            Gen::A9 => "a9",
            Gen::C17 => "c17",
        }
    }

    pub fn from_name(s: &str) -> Option<Gen> {
        ALL_GENS.into_iter().find(|g| g.name() == s)
    }

    /// Slot in the exponent vector, for the six even generators.
    pub fn poly_index(self) -> Option<usize> {
        POLY_GENS.iter().position(|&g| g == self)
    }

    pub fn letter(self) -> Option<Letter> {
        match self {
            Gen::A9 => Some(Letter::A9),
            Gen::C17 => Some(Letter::C17),
            _ => None,
        }
    }
}

/// Weight assignments inducing decreasing filtrations.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FiltrationScheme {
    /// a_i ↦ 2, b_j ↦ 0, a9 ↦ 1, c17 ↦ 2.
    WeightS3,
    /// every generator ↦ 1 except c17 ↦ 2.
    MayS5,
    Trivial,
}

impl FiltrationScheme {
    pub const ALL: [FiltrationScheme; 3] = [
        FiltrationScheme::WeightS3,
        FiltrationScheme::MayS5,
        FiltrationScheme::Trivial,
    ];

    pub fn gen_weight(self, g: Gen) -> i64 {
        match self {
            FiltrationScheme::Trivial => 0,
            FiltrationScheme::WeightS3 => match g {
                Gen::A4 | Gen::A8 | Gen::A10 | Gen::C17 => 2,
                Gen::A9 => 1,
                Gen::B12 | Gen::B16 | Gen::B18 => 0,
            },
            FiltrationScheme::MayS5 => match g {
                Gen::C17 => 2,
                _ => 1,
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FiltrationScheme::WeightS3 => "weight_s3",
            FiltrationScheme::MayS5 => "may_s5",
            FiltrationScheme::Trivial => "trivial",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }
}

/// Normal-form basis monomial: `word · a4^i1 a8^i2 a10^i3 b12^j1 b16^j2 b18^j3`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub word: Vec<Letter>,
    pub exps: [u32; 6],
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(word: Vec<Letter>, exps: [u32; 6]) -> Self {
        Monomial { word, exps }
    }

    pub fn poly(exps: [u32; 6]) -> Self {
        Monomial { word: Vec::new(), exps }
    }

    pub fn generator(g: Gen) -> Self {
        match g.letter() {
            Some(l) => Monomial::new(vec![l], [0; 6]),
            None => {
                let mut exps = [0; 6];
                exps[g.poly_index().expect("even generator")] = 1;
                Monomial::poly(exps)
            }
        }
    }

    pub fn word_degree(&self) -> u32 {
        self.word.iter().map(|l| l.degree()).sum()
    }

    pub fn poly_degree(&self) -> u32 {
        self.exps.iter().zip(POLY_DEGREES).map(|(e, d)| e * d).sum()
    }

    pub fn degree(&self) -> u32 {
        self.word_degree() + self.poly_degree()
    }

    pub fn is_poly(&self) -> bool {
        self.word.is_empty()
    }

    pub fn weight(&self, scheme: FiltrationScheme) -> i64 {
        let w: i64 = self
            .word
            .iter()
            .map(|l| scheme.gen_weight(l.generator()))
            .sum();
        let p: i64 = self
            .exps
            .iter()
            .zip(POLY_GENS)
            .map(|(&e, g)| e as i64 * scheme.gen_weight(g))
            .sum();
        w + p
    }

    /// Generators in normal-form order, with multiplicity.
    pub fn factors(&self) -> Vec<Gen> {
        let mut out: Vec<Gen> = self.word.iter().map(|l| l.generator()).collect();
        for (i, &e) in self.exps.iter().enumerate() {
            out.extend(std::iter::repeat(POLY_GENS[i]).take(e as usize));
        }
        out
    }

    fn poly_part_string(&self) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(POLY_GENS[i].name().to_string()),
                _ => parts.push(format!("{}^{}", POLY_GENS[i].name(), e)),
            }
        }
        parts.join(" ")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word: Vec<&str> = self.word.iter().map(|l| l.generator().name()).collect();
        let poly = self.poly_part_string();
        match (word.is_empty(), poly.is_empty()) {
            (true, true) => write!(f, "1"),
            (false, true) => write!(f, "{}", word.join(" ")),
            (true, false) => write!(f, "{poly}"),
            (false, false) => write!(f, "{} | {}", word.join(" "), poly),
        }
    }
}

/// Finite F3-combination of normal-form monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Element {
    terms: BTreeMap<Monomial, F3>,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_monomial(Monomial::one())
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Self::term(F3::ONE, m)
    }

    pub fn term(c: F3, m: Monomial) -> Self {
        let mut e = Self::zero();
        e.add_term(c, m);
        e
    }

    pub fn generator(g: Gen) -> Self {
        Self::from_monomial(Monomial::generator(g))
    }

    pub fn scalar(c: F3) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, F3)>>(terms: I) -> Self {
        let mut e = Self::zero();
        for (m, c) in terms {
            e.add_term(c, m);
        }
        e
    }

    pub fn add_term(&mut self, c: F3, m: Monomial) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m);
        match slot {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = *o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: F3, other: &Element) {
        for (m, v) in &other.terms {
            self.add_term(c * *v, m.clone());
        }
    }

    pub fn scale(&self, c: F3) -> Element {
        let mut out = Element::zero();
        out.add_scaled(c, self);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, F3)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn coeff(&self, m: &Monomial) -> F3 {
        self.terms.get(m).copied().unwrap_or(F3::ZERO)
    }

    /// The common degree of all terms; `None` for zero or inhomogeneous elements.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn components(&self) -> BTreeMap<u32, Element> {
        let mut out: BTreeMap<u32, Element> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree()).or_default().add_term(*c, m.clone());
        }
        out
    }

    pub fn is_poly(&self) -> bool {
        self.terms.keys().all(|m| m.is_poly())
    }

    /// Minimum term weight; `None` stands for the zero element's infinite weight.
    pub fn weight(&self, scheme: FiltrationScheme) -> Option<i64> {
        self.terms.keys().map(|m| m.weight(scheme)).min()
    }

    pub fn pow(&self, n: u32) -> Element {
        let mut out = Element::one();
        for _ in 0..n {
            out = multiply(&out, self);
        }
        out
    }

    pub fn to_vector(&self, basis: &DegreeBasis) -> Option<SparseVector> {
        let mut pairs = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            pairs.push((basis.index_of(m)?, *c));
        }
        Some(SparseVector::from_pairs(pairs))
    }

    pub fn from_vector(v: &SparseVector, basis: &DegreeBasis) -> Element {
        Element::from_terms(
            v.entries()
                .iter()
                .map(|&(i, c)| (basis.monomials[i].clone(), c)),
        )
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "+{}·({})", c, m)?;
        }
        Ok(())
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(F3::ONE, rhs);
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(F3::TWO, rhs);
        out
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(F3::TWO)
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        multiply(self, rhs)
    }
}

impl Add for Element {
    type Output = Element;
    fn add(self, rhs: Element) -> Element {
        &self + &rhs
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

impl Mul for Element {
    type Output = Element;
    fn mul(self, rhs: Element) -> Element {
        multiply(&self, &rhs)
    }
}

fn add_exps(a: &[u32; 6], b: &[u32; 6]) -> [u32; 6] {
    let mut out = *a;
    for i in 0..6 {
        out[i] += b[i];
    }
    out
}

/// `[P, a9]` divided out by c17: the derivation b_j ↦ a_{j-8}, a_i ↦ 0.
fn commutator_derivation(p: &[u32; 6]) -> Vec<([u32; 6], F3)> {
    let mut out = Vec::new();
    for j in 0..3 {
        let e = p[3 + j];
        if e == 0 {
            continue;
        }
        let c = F3::new(e as i64);
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

/// Rewrites `P · word` into normal form: a list of `(word', P', coefficient)`.
fn poly_times_word(p: &[u32; 6], word: &[Letter]) -> Vec<(Vec<Letter>, [u32; 6], F3)> {
    let Some((&first, rest)) = word.split_first() else {
        return vec![(Vec::new(), *p, F3::ONE)];
    };
    let mut out = Vec::new();
    for (w, q, c) in poly_times_word(p, rest) {
        let mut nw = Vec::with_capacity(w.len() + 1);
        nw.push(first);
        nw.extend(w);
        out.push((nw, q, c));
    }
    if first == Letter::A9 {
        // P a9 = a9 P + c17 D(P)
        for (dp, dc) in commutator_derivation(p) {
            for (w, q, c) in poly_times_word(&dp, rest) {
                let mut nw = Vec::with_capacity(w.len() + 1);
                nw.push(Letter::C17);
                nw.extend(w);
                out.push((nw, q, dc * c));
            }
        }
    }
    out
}

/// Product of two normal-form monomials, normalized.
pub fn monomial_product(x: &Monomial, y: &Monomial) -> Element {
    let mut out = Element::zero();
    for (w, q, c) in poly_times_word(&x.exps, &y.word) {
        let mut word = x.word.clone();
        word.extend(w);
        out.add_term(c, Monomial::new(word, add_exps(&q, &y.exps)));
    }
    out
}

pub fn multiply(x: &Element, y: &Element) -> Element {
    let mut out = Element::zero();
    for (mx, cx) in x.terms() {
        for (my, cy) in y.terms() {
            out.add_scaled(cx * cy, &monomial_product(mx, my));
        }
    }
    out
}

/// Product of a list of generators, multiplied left to right.
pub fn product_of_generators(gens: &[Gen]) -> Element {
    gens.iter()
        .fold(Element::one(), |acc, &g| multiply(&acc, &Element::generator(g)))
}

/// All words in {a9, c17} of the given degree, in increasing order.
pub fn words_of_degree(n: u32) -> Vec<Vec<Letter>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(left: u32, cur: &mut Vec<Letter>, out: &mut Vec<Vec<Letter>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for l in [Letter::A9, Letter::C17] {
            if l.degree() <= left {
                cur.push(l);
                rec(left - l.degree(), cur, out);
                cur.pop();
            }
        }
    }
    rec(n, &mut cur, &mut out);
    out
}

/// All exponent vectors of the given polynomial degree over the listed slots.
pub fn poly_exponents_of_degree(n: u32, slots: &[usize]) -> Vec<[u32; 6]> {
    let mut out = Vec::new();
    fn rec(left: u32, k: usize, slots: &[usize], cur: &mut [u32; 6], out: &mut Vec<[u32; 6]>) {
        if k == slots.len() {
            if left == 0 {
                out.push(*cur);
            }
            return;
        }
        let d = POLY_DEGREES[slots[k]];
        let mut e = 0;
        while e * d <= left {
            cur[slots[k]] = e;
            rec(left - e * d, k + 1, slots, cur, out);
            e += 1;
        }
        cur[slots[k]] = 0;
    }
    let mut cur = [0; 6];
    rec(n, 0, slots, &mut cur, &mut out);
    out
}

/// Ordered list of all normal-form monomials of one total degree.
#[derive(Clone, Debug)]
pub struct DegreeBasis {
    pub degree: u32,
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DegreeBasis {
    pub fn new(degree: u32) -> Self {
        let mut monomials = Vec::new();
        for wd in 0..=degree {
            let words = words_of_degree(wd);
            if words.is_empty() {
                continue;
            }
            let polys = poly_exponents_of_degree(degree - wd, &[0, 1, 2, 3, 4, 5]);
            for w in &words {
                for p in &polys {
                    monomials.push(Monomial::new(w.clone(), *p));
                }
            }
        }
        monomials.sort();
        Self::from_sorted(degree, monomials)
    }

    /// Purely commutative monomials of the given degree.
    pub fn poly_only(degree: u32) -> Self {
        let mut monomials: Vec<Monomial> = poly_exponents_of_degree(degree, &[0, 1, 2, 3, 4, 5])
            .into_iter()
            .map(Monomial::poly)
            .collect();
        monomials.sort();
        Self::from_sorted(degree, monomials)
    }

    fn from_sorted(degree: u32, monomials: Vec<Monomial>) -> Self {
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        DegreeBasis {
            degree,
            monomials,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// Uniformly random element supported on a degree basis.
pub fn random_homogeneous<R: Rng>(rng: &mut R, basis: &DegreeBasis, max_terms: usize) -> Element {
    let mut e = Element::zero();
    if basis.dim() == 0 {
        return e;
    }
    let k = rng.gen_range(1..=max_terms.max(1));
    for _ in 0..k {
        let i = rng.gen_range(0..basis.dim());
        let c = F3::new(rng.gen_range(1..=2));
        e.add_term(c, basis.monomials[i].clone());
    }
    e
}
