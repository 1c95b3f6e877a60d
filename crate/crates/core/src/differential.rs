//! The differential on V̄ and the audit that fixes its sign rule.
//!
//! On generators: d(a_i) = d(a9) = 0, d(b_j) = -a9·a_{j-8}, d(c17) = a9².
//! The extension to products is a Leibniz rule whose sign factor is a
//! parameter; [`audit_conventions`] tests each candidate for
//! factorization independence and d² = 0.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{
    multiply, random_homogeneous, DegreeBasis, Element, Gen, Letter, Monomial, ALL_GENS,
};
use crate::gf3::{SparseMatrixF3, SparseVector, F3};
use crate::partial::partial_exps;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SignConvention {
    /// ε(x) = (-1)^{deg x}
    TotalDegreeParity,
    ConstantPlus,
    ConstantMinus,
}

impl SignConvention {
    pub const CANDIDATES: [SignConvention; 3] = [
        SignConvention::TotalDegreeParity,
        SignConvention::ConstantPlus,
        SignConvention::ConstantMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SignConvention::TotalDegreeParity => "total-degree-parity",
            SignConvention::ConstantPlus => "constant-plus",
            SignConvention::ConstantMinus => "constant-minus",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::CANDIDATES.into_iter().find(|c| c.name() == s)
    }

    /// Sign in d(xy) = dx·y + ε(x)·x·dy for homogeneous x of the given degree.
    pub fn epsilon(self, degree: u32) -> F3 {
        match self {
            SignConvention::TotalDegreeParity if degree % 2 == 1 => -F3::ONE,
            SignConvention::TotalDegreeParity => F3::ONE,
            SignConvention::ConstantPlus => F3::ONE,
            SignConvention::ConstantMinus => -F3::ONE,
        }
    }
}

#[derive(Debug, Error)]
pub enum DifferentialError {
    #[error("no candidate sign convention is admissible")]
    NoAdmissibleConvention,
    #[error("expected a one-dimensional cocycle space in span{{a9 c17, c17 a9}}, found {0}")]
    X26Kernel(usize),
}

pub fn d_generator(g: Gen) -> Element {
    match g {
        Gen::A4 | Gen::A8 | Gen::A10 | Gen::A9 => Element::zero(),
        Gen::C17 => Element::from_monomial(Monomial::new(vec![Letter::A9, Letter::A9], [0; 6])),
        Gen::B12 | Gen::B16 | Gen::B18 => {
            let slot = g.poly_index().expect("b generator") - 3;
            let mut exps = [0; 6];
            exps[slot] = 1;
            Element::term(-F3::ONE, Monomial::new(vec![Letter::A9], exps))
        }
    }
}

fn monomial_of_factors(factors: &[Gen]) -> Monomial {
    let mut m = Monomial::one();
    for &g in factors {
        match g.letter() {
            Some(l) => m.word.push(l),
            None => m.exps[g.poly_index().expect("even")] += 1,
        }
    }
    m
}

/// Leibniz expansion over the normal-form factorization, right-nested:
/// d(g·rest) = d(g)·rest + ε(g)·g·d(rest).
pub fn d_leibniz_monomial(conv: SignConvention, m: &Monomial) -> Element {
    let factors = m.factors();
    let mut out = Element::zero();
    let mut sign = F3::ONE;
    for i in 0..factors.len() {
        let dg = d_generator(factors[i]);
        if !dg.is_zero() {
            let prefix = Element::from_monomial(monomial_of_factors(&factors[..i]));
            let suffix = Element::from_monomial(monomial_of_factors(&factors[i + 1..]));
            let t = multiply(&prefix, &multiply(&dg, &suffix));
            out.add_scaled(sign, &t);
        }
        sign *= conv.epsilon(factors[i].degree());
    }
    out
}

pub fn d_leibniz(conv: SignConvention, x: &Element) -> Element {
    let mut out = Element::zero();
    for (m, c) in x.terms() {
        out.add_scaled(c, &d_leibniz_monomial(conv, m));
    }
    out
}

/// Closed form under the parity rule: for a word w and P in the
/// commutative part, d(wP) = d(w)·P + (-1)^{|w|}·w·(a9·∂P + c17·∂²P).
pub fn d_parity_monomial(m: &Monomial) -> Element {
    let mut out = Element::zero();
    let mut prefix_deg = 0;
    for (i, &l) in m.word.iter().enumerate() {
        if l == Letter::C17 {
            let mut w = m.word[..i].to_vec();
            w.push(Letter::A9);
            w.push(Letter::A9);
            w.extend_from_slice(&m.word[i + 1..]);
            let s = SignConvention::TotalDegreeParity.epsilon(prefix_deg);
            out.add_term(s, Monomial::new(w, m.exps));
        }
        prefix_deg += l.degree();
    }
    let s = SignConvention::TotalDegreeParity.epsilon(prefix_deg);
    let first = partial_exps(&m.exps);
    for (q, c) in &first {
        let mut w = m.word.clone();
        w.push(Letter::A9);
        out.add_term(s * *c, Monomial::new(w, *q));
    }
    for (q1, c1) in &first {
        for (q2, c2) in partial_exps(q1) {
            let mut w = m.word.clone();
            w.push(Letter::C17);
            out.add_term(s * *c1 * c2, Monomial::new(w, q2));
        }
    }
    out
}

/// The differential under a fixed convention.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Differential {
    pub convention: SignConvention,
}

impl Default for Differential {
    fn default() -> Self {
        Differential {
            convention: SignConvention::TotalDegreeParity,
        }
    }
}

impl Differential {
    pub fn new(convention: SignConvention) -> Self {
        Differential { convention }
    }

    pub fn apply_monomial(&self, m: &Monomial) -> Element {
        match self.convention {
            SignConvention::TotalDegreeParity => d_parity_monomial(m),
            c => d_leibniz_monomial(c, m),
        }
    }

    pub fn apply(&self, x: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in x.terms() {
            out.add_scaled(c, &self.apply_monomial(m));
        }
        out
    }

    /// Matrix of d: V̄_n → V̄_{n+1}, columns in source basis order.
    pub fn matrix(&self, source: &DegreeBasis, target: &DegreeBasis) -> SparseMatrixF3 {
        let columns: Vec<SparseVector> = source
            .monomials
            .par_iter()
            .map(|m| {
                self.apply_monomial(m)
                    .to_vector(target)
                    .expect("d raises degree by one")
            })
            .collect();
        SparseMatrixF3::from_columns(target.dim(), columns).expect("indices come from target basis")
    }

    /// Short text fingerprint for cache keys.
    pub fn fingerprint(&self) -> String {
        self.convention.name().to_string()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateReport {
    pub convention: SignConvention,
    pub generator_pairs_ok: bool,
    pub random_pairs_checked: usize,
    pub random_pairs_ok: bool,
    /// First degree at which d² ≠ 0 was found, if any.
    pub d_squared_failure: Option<u32>,
    pub d_squared_bound: u32,
    pub first_counterexample: Option<String>,
    pub admissible: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConventionAudit {
    pub candidates: Vec<CandidateReport>,
    pub selected: SignConvention,
    /// Coefficients of x26 on (a9 c17, c17 a9).
    pub x26_coefficients: (i64, i64),
    #[serde(skip)]
    pub x26: Element,
    /// Closed-form parity differential equals the Leibniz expansion on every
    /// basis monomial up to this degree.
    pub closed_form_checked_to: u32,
    pub closed_form_agrees: bool,
}

#[derive(Clone, Debug)]
pub struct AuditConfig {
    pub random_pairs: usize,
    pub random_pair_max_degree: u32,
    pub d_squared_bound: u32,
    pub closed_form_bound: u32,
    pub seed: u64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            random_pairs: 1000,
            random_pair_max_degree: 40,
            d_squared_bound: 80,
            closed_form_bound: 60,
            seed: 0x5eed_0003,
        }
    }
}

/// `d(xy) - (dx·y + ε(x)·x·dy)` for homogeneous x.
pub fn leibniz_defect(conv: SignConvention, x: &Element, y: &Element) -> Element {
    let lhs = d_leibniz(conv, &multiply(x, y));
    let eps = conv.epsilon(x.degree().unwrap_or(0));
    let mut rhs = multiply(&d_leibniz(conv, x), y);
    rhs.add_scaled(eps, &multiply(x, &d_leibniz(conv, y)));
    &lhs - &rhs
}

fn audit_candidate(conv: SignConvention, cfg: &AuditConfig, bases: &[DegreeBasis]) -> CandidateReport {
    let mut counterexample = None;
    let mut generator_pairs_ok = true;
    'pairs: for &g in &ALL_GENS {
        for &h in &ALL_GENS {
            let defect = leibniz_defect(conv, &Element::generator(g), &Element::generator(h));
            if !defect.is_zero() {
                generator_pairs_ok = false;
                counterexample = Some(format!(
                    "d({}·{}) differs between factorizations by {}",
                    g.name(),
                    h.name(),
                    defect
                ));
                break 'pairs;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let nonempty: Vec<&DegreeBasis> = bases
        .iter()
        .filter(|b| b.degree > 0 && b.degree <= cfg.random_pair_max_degree && b.dim() > 0)
        .collect();
    let mut random_pairs_ok = true;
    let mut checked = 0;
    if generator_pairs_ok {
        use rand::seq::SliceRandom;
        for _ in 0..cfg.random_pairs {
            let bx = nonempty.choose(&mut rng).expect("bases");
            let by = nonempty.choose(&mut rng).expect("bases");
            let x = random_homogeneous(&mut rng, bx, 3);
            let y = random_homogeneous(&mut rng, by, 3);
            checked += 1;
            let defect = leibniz_defect(conv, &x, &y);
            if !defect.is_zero() {
                random_pairs_ok = false;
                counterexample = Some(format!("random pair ({x}) · ({y}) has defect {defect}"));
                break;
            }
        }
    } else {
        random_pairs_ok = false;
    }

    let d = Differential::new(conv);
    let mut d_squared_failure = None;
    for basis in bases.iter().filter(|b| b.degree <= cfg.d_squared_bound) {
        let bad = basis.monomials.par_iter().find_any(|m| {
            let dm = d.apply_monomial(m);
            !d.apply(&dm).is_zero()
        });
        if let Some(m) = bad {
            d_squared_failure = Some(basis.degree);
            if counterexample.is_none() {
                counterexample = Some(format!("d²({m}) ≠ 0"));
            }
            break;
        }
    }

    CandidateReport {
        convention: conv,
        generator_pairs_ok,
        random_pairs_checked: checked,
        random_pairs_ok,
        d_squared_failure,
        d_squared_bound: cfg.d_squared_bound,
        first_counterexample: counterexample,
        admissible: generator_pairs_ok && random_pairs_ok && d_squared_failure.is_none(),
    }
}

/// The degree-26 cocycle in span{a9 c17, c17 a9}, normalized to
/// coefficient 1 on a9 c17.
pub fn x26_by_kernel(d: &Differential) -> Result<(Element, (i64, i64)), DifferentialError> {
    let ac = Monomial::new(vec![Letter::A9, Letter::C17], [0; 6]);
    let ca = Monomial::new(vec![Letter::C17, Letter::A9], [0; 6]);
    let target = DegreeBasis::new(27);
    let cols = [&ac, &ca]
        .iter()
        .map(|m| d.apply_monomial(m).to_vector(&target).expect("degree 27"))
        .collect();
    let mat = SparseMatrixF3::from_columns(target.dim(), cols).expect("in range");
    let kernel = mat.kernel_basis();
    if kernel.len() != 1 {
        return Err(DifferentialError::X26Kernel(kernel.len()));
    }
    let mut v = kernel[0].clone();
    let lead = v.get(0);
    if !lead.is_zero() {
        v.scale(lead.inv().expect("nonzero"));
    }
    let (c0, c1) = (v.get(0), v.get(1));
    let x = Element::from_terms([(ac, c0), (ca, c1)]);
    Ok((x, (c0.signed(), c1.signed())))
}

pub fn audit_conventions(cfg: &AuditConfig) -> Result<ConventionAudit, DifferentialError> {
    let top = cfg.d_squared_bound.max(cfg.random_pair_max_degree);
    let bases: Vec<DegreeBasis> = (0..=top).into_par_iter().map(DegreeBasis::new).collect();
    let candidates: Vec<CandidateReport> = SignConvention::CANDIDATES
        .iter()
        .map(|&c| audit_candidate(c, cfg, &bases))
        .collect();
    let selected = candidates
        .iter()
        .find(|c| c.admissible)
        .map(|c| c.convention)
        .ok_or(DifferentialError::NoAdmissibleConvention)?;
    let d = Differential::new(selected);
    let (x26, x26_coefficients) = x26_by_kernel(&d)?;

    let closed_form_agrees = bases
        .iter()
        .filter(|b| b.degree <= cfg.closed_form_bound)
        .all(|b| {
            b.monomials.par_iter().all(|m| {
                d_parity_monomial(m) == d_leibniz_monomial(SignConvention::TotalDegreeParity, m)
            })
        });

    Ok(ConventionAudit {
        candidates,
        selected,
        x26_coefficients,
        x26,
        closed_form_checked_to: cfg.closed_form_bound,
        closed_form_agrees,
    })
}
