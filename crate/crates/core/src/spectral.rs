//! Page dimensions of the spectral sequence of a weight-filtered V̄.
//!
//! With F^p spanned by monomials of weight ≥ p, every quantity reduces to
//! ranks of blocks of the differential matrices with weight-sorted rows
//! and columns:
//!
//! dim E_r^{p,n} = z(p, p+r) - z(p+1, p+r) - b(p, p-r+1) + b(p+1, p-r+1)
//!
//! where z(p, q) = dim F^p ∩ d⁻¹F^q in degree n and
//! b(a, c) = dim F^a ∩ d(F^c) with sources in degree n - 1.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::FiltrationScheme;
use crate::cohomology::Complex;
use crate::gf3::{ColumnSpace, SparseVector};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Page {
    Finite(u32),
    Infinity,
}

impl Page {
    pub fn parse(s: &str) -> Option<Page> {
        match s {
            "inf" | "infinity" | "∞" => Some(Page::Infinity),
            _ => s.parse().ok().map(Page::Finite),
        }
    }

    pub fn label(self) -> String {
        match self {
            Page::Finite(r) => r.to_string(),
            Page::Infinity => "inf".to_string(),
        }
    }
}

/// Rank of a set of sparse columns; pivots keyed by leading row.
fn incremental_rank() -> impl FnMut(SparseVector) -> bool {
    let mut pivots: HashMap<usize, SparseVector> = HashMap::new();
    move |mut v: SparseVector| {
        while let Some((lead, c)) = v.leading() {
            match pivots.get(&lead) {
                Some(p) => {
                    let s = -(c * p.get(lead).inv().expect("pivot"));
                    v.add_scaled(s, p);
                }
                None => {
                    pivots.insert(lead, v);
                    return true;
                }
            }
        }
        false
    }
}

/// Block ranks of d_n: V̄_n → V̄_{n+1}.
/// `ranks[q][p]` = rank of rows with weight < q against columns with weight ≥ p.
#[derive(Clone, Debug)]
struct BlockRanks {
    max_weight: i64,
    ranks: Vec<Vec<usize>>,
}

impl BlockRanks {
    fn compute(complex: &Complex, scheme: FiltrationScheme, n: u32) -> Self {
        let src: Vec<i64> = complex.basis(n).monomials.iter().map(|m| m.weight(scheme)).collect();
        let tgt: Vec<i64> = complex
            .basis(n + 1)
            .monomials
            .iter()
            .map(|m| m.weight(scheme))
            .collect();
        let max_weight = src.iter().chain(&tgt).copied().max().unwrap_or(0);
        let top = (max_weight + 1) as usize;
        let mut order: Vec<usize> = (0..src.len()).collect();
        order.sort_by_key(|&j| std::cmp::Reverse(src[j]));
        let m = complex.matrix(n);
        let ranks = (0..=top)
            .into_par_iter()
            .map(|q| {
                let mut push = incremental_rank();
                let mut rank = 0;
                let mut by_p = vec![0; top + 1];
                let mut k = 0;
                for p in (0..=top).rev() {
                    while k < order.len() && src[order[k]] >= p as i64 {
                        let col = m
                            .column(order[k])
                            .restrict(|i| (tgt[i] < q as i64).then_some(i));
                        if push(col) {
                            rank += 1;
                        }
                        k += 1;
                    }
                    by_p[p] = rank;
                }
                by_p
            })
            .collect();
        BlockRanks { max_weight, ranks }
    }

    fn get(&self, p: i64, q: i64) -> usize {
        let top = self.max_weight + 1;
        let p = p.clamp(0, top) as usize;
        let q = q.clamp(0, top) as usize;
        self.ranks[q][p]
    }

    fn full(&self, p: i64) -> usize {
        self.get(p, self.max_weight + 1)
    }
}

/// Filtration data for degrees 0..=max_degree of one scheme.
#[derive(Clone, Debug)]
pub struct SpectralEngine {
    pub scheme: FiltrationScheme,
    pub max_degree: u32,
    // F^p sizes per degree, indexed by p
    filt: Vec<Vec<usize>>,
    blocks: Vec<BlockRanks>,
}

impl SpectralEngine {
    pub fn new(complex: &Complex, scheme: FiltrationScheme, max_degree: u32) -> Self {
        let max_degree = max_degree.min(complex.max_degree);
        let blocks = (0..=max_degree)
            .into_par_iter()
            .map(|n| BlockRanks::compute(complex, scheme, n))
            .collect();
        let filt = (0..=max_degree)
            .map(|n| {
                let w: Vec<i64> = complex.basis(n).monomials.iter().map(|m| m.weight(scheme)).collect();
                let top = w.iter().copied().max().unwrap_or(0);
                (0..=top + 1)
                    .map(|p| w.iter().filter(|&&x| x >= p).count())
                    .collect()
            })
            .collect();
        SpectralEngine {
            scheme,
            max_degree,
            filt,
            blocks,
        }
    }

    /// Largest weight occurring in degree n.
    pub fn top_weight(&self, n: u32) -> i64 {
        self.filt[n as usize].len() as i64 - 2
    }

    fn f_dim(&self, n: u32, p: i64) -> usize {
        let f = &self.filt[n as usize];
        let p = p.max(0) as usize;
        f.get(p).copied().unwrap_or(0)
    }

    fn z(&self, n: u32, p: i64, q: i64) -> usize {
        self.f_dim(n, p) - self.blocks[n as usize].get(p, q)
    }

    fn b(&self, n: u32, a: i64, c: i64) -> usize {
        if n == 0 {
            return 0;
        }
        let blk = &self.blocks[n as usize - 1];
        blk.full(c) - blk.get(c, a)
    }

    fn infinity_r(&self) -> u32 {
        let w = self
            .blocks
            .iter()
            .map(|b| b.max_weight)
            .chain((0..=self.max_degree).map(|n| self.top_weight(n)))
            .max()
            .unwrap_or(0);
        (w + 2) as u32
    }

    pub fn dim(&self, page: Page, p: i64, n: u32) -> usize {
        let r = match page {
            Page::Finite(r) => r as i64,
            Page::Infinity => self.infinity_r() as i64,
        };
        let plus = self.z(n, p, p + r) + self.b(n, p + 1, p - r + 1);
        let minus = self.z(n, p + 1, p + r) + self.b(n, p, p - r + 1);
        plus - minus
    }

    pub fn page(&self, page: Page) -> PageTable {
        let dims = (0..=self.max_degree)
            .map(|n| (0..=self.top_weight(n)).map(|p| self.dim(page, p, n)).collect())
            .collect();
        PageTable {
            scheme: self.scheme,
            page,
            max_degree: self.max_degree,
            dims,
        }
    }

    /// Terms of d of lower weight than the source, per degree.
    pub fn compatibility_violations(complex: &Complex, scheme: FiltrationScheme, max_degree: u32) -> usize {
        (0..=max_degree.min(complex.max_degree))
            .into_par_iter()
            .map(|n| {
                let src = &complex.basis(n).monomials;
                let tgt = &complex.basis(n + 1).monomials;
                complex
                    .matrix(n)
                    .columns()
                    .iter()
                    .enumerate()
                    .map(|(j, col)| {
                        let w = src[j].weight(scheme);
                        col.entries()
                            .iter()
                            .filter(|(i, _)| tgt[*i].weight(scheme) < w)
                            .count()
                    })
                    .sum::<usize>()
            })
            .sum()
    }

    /// Pages r (within 1..=limit) whose differential d_r is nonzero somewhere.
    pub fn nonzero_differentials(&self, limit: u32) -> Vec<u32> {
        let tables: Vec<PageTable> = (1..=limit + 1).map(|r| self.page(Page::Finite(r))).collect();
        (0..limit as usize)
            .filter(|&i| tables[i].dims != tables[i + 1].dims)
            .map(|i| i as u32 + 1)
            .collect()
    }

    /// Smallest r ≥ 1 with E_r = E_∞ in every cell.
    pub fn collapsed_at(&self) -> u32 {
        let inf = self.page(Page::Infinity);
        (1..=self.infinity_r())
            .find(|&r| self.page(Page::Finite(r)).dims == inf.dims)
            .unwrap_or(self.infinity_r())
    }
}

/// E_∞ from subspaces: dim (F^p ∩ ker d + im d) / (F^{p+1} ∩ ker d + im d).
pub fn e_infinity_by_subspaces(complex: &Complex, scheme: FiltrationScheme, n: u32) -> Vec<usize> {
    let basis = complex.basis(n);
    let w: Vec<i64> = basis.monomials.iter().map(|m| m.weight(scheme)).collect();
    let top = w.iter().copied().max().unwrap_or(0);
    let kernel = ColumnSpace::new(complex.basis(n + 1).dim(), complex.matrix(n).columns().to_vec(), true)
        .into_kernel();
    let image = complex.image_columns(n);
    let dims: Vec<usize> = (0..=top + 1)
        .map(|p| {
            // kernel ∩ F^p: kill coordinates of weight < p
            let low: Vec<SparseVector> = kernel
                .iter()
                .map(|v| v.restrict(|i| (w[i] < p).then_some(i)))
                .collect();
            let proj = ColumnSpace::new(basis.dim(), low, true);
            let mut cols = image.clone();
            for combo in proj.kernel() {
                let mut v = SparseVector::new();
                for (k, c) in combo.entries() {
                    v.add_scaled(*c, &kernel[*k]);
                }
                cols.push(v);
            }
            ColumnSpace::new(basis.dim(), cols, false).rank()
        })
        .collect();
    dims.windows(2).map(|x| x[0] - x[1]).collect()
}

/// dim E_r^{p,n} for 0 ≤ n ≤ max_degree and 0 ≤ p ≤ top weight in degree n.
#[derive(Clone, Debug, Serialize)]
pub struct PageTable {
    pub scheme: FiltrationScheme,
    pub page: Page,
    pub max_degree: u32,
    pub dims: Vec<Vec<usize>>,
}

impl PageTable {
    pub fn get(&self, p: i64, n: u32) -> usize {
        if p < 0 {
            return 0;
        }
        self.dims
            .get(n as usize)
            .and_then(|row| row.get(p as usize))
            .copied()
            .unwrap_or(0)
    }

    pub fn total(&self, n: u32) -> usize {
        self.dims[n as usize].iter().sum()
    }

    pub fn totals(&self) -> Vec<usize> {
        (0..=self.max_degree).map(|n| self.total(n)).collect()
    }

    pub fn max_filtration(&self) -> usize {
        self.dims.iter().map(|r| r.len()).max().unwrap_or(0)
    }

    /// Cells (p, n) where the two tables differ.
    pub fn mismatches(&self, other: &PageTable) -> Vec<Mismatch> {
        let mut out = Vec::new();
        let top = self.max_degree.min(other.max_degree);
        for n in 0..=top {
            let width = self.dims[n as usize].len().max(other.dims[n as usize].len());
            for p in 0..width as i64 {
                let (a, b) = (self.get(p, n), other.get(p, n));
                if a != b {
                    out.push(Mismatch { p, n, left: a, right: b });
                }
            }
        }
        out
    }

    /// Rows n, columns p.
    pub fn to_csv(&self) -> String {
        let width = self.max_filtration();
        let mut s = String::from("n");
        for p in 0..width {
            s.push_str(&format!(",p{p}"));
        }
        s.push('\n');
        for n in 0..=self.max_degree {
            s.push_str(&n.to_string());
            for p in 0..width {
                s.push_str(&format!(",{}", self.get(p as i64, n)));
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub p: i64,
    pub n: u32,
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PageComparison {
    pub scheme: FiltrationScheme,
    pub left: Page,
    pub right: Page,
    pub max_degree: u32,
    pub mismatches: Vec<Mismatch>,
}

impl PageComparison {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn page_equality_check(engine: &SpectralEngine, r1: Page, r2: Page) -> PageComparison {
    let a = engine.page(r1);
    let b = engine.page(r2);
    PageComparison {
        scheme: engine.scheme,
        left: r1,
        right: r2,
        max_degree: engine.max_degree,
        mismatches: a.mismatches(&b),
    }
}

pub fn collapse_check(engine: &SpectralEngine, r: u32) -> PageComparison {
    page_equality_check(engine, Page::Finite(r), Page::Infinity)
}

/// Cells where a later page is larger than an earlier one, over pages 0..=limit and ∞.
pub fn monotonicity_violations(engine: &SpectralEngine, limit: u32) -> Vec<(Page, Mismatch)> {
    let mut pages: Vec<Page> = (0..=limit).map(Page::Finite).collect();
    pages.push(Page::Infinity);
    let tables: Vec<PageTable> = pages.par_iter().map(|&p| engine.page(p)).collect();
    let mut out = Vec::new();
    for i in 0..tables.len() - 1 {
        for m in tables[i].mismatches(&tables[i + 1]) {
            if m.right > m.left {
                out.push((pages[i + 1], m));
            }
        }
    }
    out
}

/// Summary of the weight jump of d on basis monomials.
#[derive(Clone, Debug, Serialize)]
pub struct JumpSurvey {
    pub scheme: FiltrationScheme,
    pub max_degree: u32,
    /// Smallest weight increase over all nonzero terms of d(m).
    pub min_jump: Option<i64>,
    /// Smallest weight increase of d on cocycle classes of S, i.e. the first
    /// page beyond E_1 whose differential is nonzero.
    pub first_nonzero_page: Option<u32>,
    pub nonzero_pages: Vec<u32>,
}

pub fn jump_survey(complex: &Complex, engine: &SpectralEngine) -> JumpSurvey {
    let scheme = engine.scheme;
    let min_jump = (0..=engine.max_degree)
        .into_par_iter()
        .filter_map(|n| {
            let src = &complex.basis(n).monomials;
            let tgt = &complex.basis(n + 1).monomials;
            complex
                .matrix(n)
                .columns()
                .iter()
                .enumerate()
                .flat_map(|(j, col)| {
                    let w = src[j].weight(scheme);
                    col.entries().iter().map(move |(i, _)| tgt[*i].weight(scheme) - w)
                })
                .min()
        })
        .min();
    let nonzero = engine.nonzero_differentials(engine.infinity_r());
    JumpSurvey {
        scheme,
        max_degree: engine.max_degree,
        min_jump,
        first_nonzero_page: nonzero.iter().copied().find(|&r| r > 1),
        nonzero_pages: nonzero,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::differential::Differential;

    #[test]
    fn trivial_scheme_is_homology() {
        let cx = Complex::new(20, Differential::default());
        let eng = SpectralEngine::new(&cx, FiltrationScheme::Trivial, 20);
        let e1 = eng.page(Page::Finite(1));
        assert_eq!(e1.totals(), cx.homology_dims()[..=20].to_vec());
        assert!(collapse_check(&eng, 1).passed());
    }

    #[test]
    fn e0_is_associated_graded() {
        let cx = Complex::new(12, Differential::default());
        let eng = SpectralEngine::new(&cx, FiltrationScheme::MayS5, 12);
        let e0 = eng.page(Page::Finite(0));
        for n in 0..=12 {
            assert_eq!(e0.total(n), cx.basis(n).dim());
        }
    }

    #[test]
    fn may_small_degrees() {
        let cx = Complex::new(12, Differential::default());
        let eng = SpectralEngine::new(&cx, FiltrationScheme::MayS5, 12);
        let e1 = eng.page(Page::Finite(1));
        assert_eq!(e1.total(8), 2);
        assert_eq!(e1.total(9), 1);
    }

    #[test]
    fn infinity_agrees_with_subspaces() {
        let cx = Complex::new(30, Differential::default());
        for scheme in [FiltrationScheme::WeightS3, FiltrationScheme::MayS5] {
            let eng = SpectralEngine::new(&cx, scheme, 30);
            let inf = eng.page(Page::Infinity);
            for n in [0, 9, 17, 21, 26, 30] {
                let direct = e_infinity_by_subspaces(&cx, scheme, n);
                for (p, d) in direct.iter().enumerate() {
                    assert_eq!(inf.get(p as i64, n), *d, "{scheme:?} p={p} n={n}");
                }
            }
            assert_eq!(inf.totals(), cx.homology_dims()[..=30].to_vec());
            assert_eq!(SpectralEngine::compatibility_violations(&cx, scheme, 30), 0);
        }
    }

    #[test]
    fn reflexive_and_csv() {
        let cx = Complex::new(10, Differential::default());
        let eng = SpectralEngine::new(&cx, FiltrationScheme::WeightS3, 10);
        assert!(page_equality_check(&eng, Page::Finite(2), Page::Finite(2)).passed());
        let csv = eng.page(Page::Finite(1)).to_csv();
        assert!(csv.starts_with("n,p0"));
        assert_eq!(csv.lines().count(), 12);
    }
}
