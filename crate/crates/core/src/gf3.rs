//! Exact linear algebra over the field with three elements.
//!
//! Matrices are stored column-major as sorted sparse columns. Two
//! elimination engines live here: a row reducer producing the canonical
//! reduced row-echelon form, and a column reducer ([`ColumnSpace`]) that
//! tracks the combination of original columns behind every basis vector,
//! which gives kernels and image-membership witnesses in one pass.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("malformed GF3MAT text: {0}")]
    Parse(String),
}

/// An element of Z/3, held as its canonical representative 0, 1 or 2.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct F3(u8);

impl F3 {
    pub const ZERO: F3 = F3(0);
    pub const ONE: F3 = F3(1);
    pub const TWO: F3 = F3(2);

    pub fn new(value: i64) -> Self {
        F3(value.rem_euclid(3) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Signed representative in {-1, 0, 1}.
    pub fn signed(self) -> i64 {
        match self.0 {
            0 => 0,
            1 => 1,
            _ => -1,
        }
    }

    /// Multiplicative inverse; `None` for zero. Every nonzero element is its own inverse.
    pub fn inv(self) -> Option<F3> {
        if self.0 == 0 {
            None
        } else {
            Some(self)
        }
    }
}

impl fmt::Display for F3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<i64> for F3 {
    fn from(v: i64) -> Self {
        F3::new(v)
    }
}

impl Add for F3 {
    type Output = F3;
    fn add(self, rhs: F3) -> F3 {
        let s = self.0 + rhs.0;
        F3(if s >= 3 { s - 3 } else { s })
    }
}

impl Sub for F3 {
    type Output = F3;
    fn sub(self, rhs: F3) -> F3 {
        self + (-rhs)
    }
}

impl Neg for F3 {
    type Output = F3;
    fn neg(self) -> F3 {
        F3(if self.0 == 0 { 0 } else { 3 - self.0 })
    }
}

impl Mul for F3 {
    type Output = F3;
    fn mul(self, rhs: F3) -> F3 {
        F3((self.0 * rhs.0) % 3)
    }
}

impl AddAssign for F3 {
    fn add_assign(&mut self, rhs: F3) {
        *self = *self + rhs;
    }
}

impl SubAssign for F3 {
    fn sub_assign(&mut self, rhs: F3) {
        *self = *self - rhs;
    }
}

impl MulAssign for F3 {
    fn mul_assign(&mut self, rhs: F3) {
        *self = *self * rhs;
    }
}

/// Sparse vector over F3: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SparseVector {
    entries: Vec<(usize, F3)>,
}

impl SparseVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds from arbitrary `(index, value)` pairs, summing repeats and dropping zeros.
    pub fn from_pairs<I: IntoIterator<Item = (usize, F3)>>(pairs: I) -> Self {
        let mut acc: BTreeMap<usize, F3> = BTreeMap::new();
        for (i, v) in pairs {
            *acc.entry(i).or_default() += v;
        }
        SparseVector {
            entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn from_dense(values: &[F3]) -> Self {
        SparseVector {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, *v))
                .collect(),
        }
    }

    pub fn unit(index: usize) -> Self {
        SparseVector {
            entries: vec![(index, F3::ONE)],
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<F3> {
        let mut out = vec![F3::ZERO; len];
        for &(i, v) in &self.entries {
            out[i] = v;
        }
        out
    }

    pub fn entries(&self) -> &[(usize, F3)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, index: usize) -> F3 {
        match self.entries.binary_search_by_key(&index, |e| e.0) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => F3::ZERO,
        }
    }

    pub fn leading(&self) -> Option<(usize, F3)> {
        self.entries.first().copied()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0)
    }

    pub fn scale(&mut self, s: F3) {
        if s.is_zero() {
            self.entries.clear();
        } else {
            for e in &mut self.entries {
                e.1 *= s;
            }
        }
    }

    /// `self += s * other`, merging the two sorted supports.
    pub fn add_scaled(&mut self, s: F3, other: &SparseVector) {
        if s.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, s * b[j].1));
                j += 1;
            } else {
                let v = a[i].1 + s * b[j].1;
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        self.entries = out;
    }

    /// Keeps only entries whose index satisfies `keep`, reindexed through `map`.
    pub fn restrict(&self, mut keep: impl FnMut(usize) -> Option<usize>) -> SparseVector {
        let mut pairs: Vec<(usize, F3)> = self
            .entries
            .iter()
            .filter_map(|&(i, v)| keep(i).map(|j| (j, v)))
            .collect();
        pairs.sort_by_key(|p| p.0);
        SparseVector { entries: pairs }
    }
}

/// Exact sparse matrix over F3, stored as sorted sparse columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrixF3 {
    n_rows: usize,
    n_cols: usize,
    columns: Vec<SparseVector>,
}

/// Output of [`SparseMatrixF3::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: SparseMatrixF3,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Result of an image-membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ImageSolution {
    /// `M x = v`.
    InImage(SparseVector),
    /// `v` is not in the column space; `residual` is its canonical
    /// reduction modulo the column space (zero on every pivot row).
    NotInImage { residual: SparseVector },
}

impl ImageSolution {
    pub fn solution(&self) -> Option<&SparseVector> {
        match self {
            ImageSolution::InImage(x) => Some(x),
            ImageSolution::NotInImage { .. } => None,
        }
    }
}

impl SparseMatrixF3 {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        SparseMatrixF3 {
            n_rows,
            n_cols,
            columns: vec![SparseVector::new(); n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrixF3 {
            n_rows: n,
            n_cols: n,
            columns: (0..n).map(SparseVector::unit).collect(),
        }
    }

    pub fn from_columns(n_rows: usize, columns: Vec<SparseVector>) -> Result<Self, LinalgError> {
        let n_cols = columns.len();
        for (c, col) in columns.iter().enumerate() {
            if let Some(r) = col.max_index() {
                if r >= n_rows {
                    return Err(LinalgError::IndexOutOfRange {
                        row: r,
                        col: c,
                        rows: n_rows,
                        cols: n_cols,
                    });
                }
            }
        }
        Ok(SparseMatrixF3 {
            n_rows,
            n_cols,
            columns,
        })
    }

    /// Builds from `(row, col, value)` triples; repeated positions are summed.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, F3)>,
    ) -> Result<Self, LinalgError> {
        let mut cols: Vec<Vec<(usize, F3)>> = vec![Vec::new(); n_cols];
        for (r, c, v) in triplets {
            if r >= n_rows || c >= n_cols {
                return Err(LinalgError::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows: n_rows,
                    cols: n_cols,
                });
            }
            cols[c].push((r, v));
        }
        Ok(SparseMatrixF3 {
            n_rows,
            n_cols,
            columns: cols.into_iter().map(SparseVector::from_pairs).collect(),
        })
    }

    /// Rows given as dense slices of small integers (test and example convenience).
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        let triplets = rows.iter().enumerate().flat_map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(move |(c, &v)| (r, c, F3::new(v)))
        });
        Self::from_triplets(n_rows, n_cols, triplets).expect("rows are rectangular")
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn column(&self, c: usize) -> &SparseVector {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[SparseVector] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.nnz()).sum()
    }

    pub fn get(&self, row: usize, col: usize) -> F3 {
        self.columns[col].get(row)
    }

    /// All stored entries sorted by `(col, row)`.
    pub fn triplets(&self) -> Vec<(usize, usize, F3)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.entries().iter().map(move |&(r, v)| (r, c, v)))
            .collect()
    }

    pub fn transpose(&self) -> SparseMatrixF3 {
        let mut cols: Vec<Vec<(usize, F3)>> = vec![Vec::new(); self.n_rows];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col.entries() {
                cols[r].push((c, v));
            }
        }
        SparseMatrixF3 {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            columns: cols.into_iter().map(|entries| SparseVector { entries }).collect(),
        }
    }

    pub fn mul_vec(&self, x: &SparseVector) -> Result<SparseVector, LinalgError> {
        if let Some(i) = x.max_index() {
            if i >= self.n_cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: self.n_cols,
                    found: i + 1,
                });
            }
        }
        let mut out = SparseVector::new();
        for &(c, v) in x.entries() {
            out.add_scaled(v, &self.columns[c]);
        }
        Ok(out)
    }

    pub fn mul(&self, rhs: &SparseMatrixF3) -> Result<SparseMatrixF3, LinalgError> {
        if self.n_cols != rhs.n_rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.n_cols,
                found: rhs.n_rows,
            });
        }
        let columns = rhs
            .columns
            .iter()
            .map(|c| self.mul_vec(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SparseMatrixF3 {
            n_rows: self.n_rows,
            n_cols: rhs.n_cols,
            columns,
        })
    }

    /// Submatrix on the selected rows and columns (both in increasing order).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> SparseMatrixF3 {
        let mut row_map = vec![usize::MAX; self.n_rows];
        for (new, &old) in rows.iter().enumerate() {
            row_map[old] = new;
        }
        let columns = cols
            .iter()
            .map(|&c| {
                self.columns[c].restrict(|r| {
                    let m = row_map[r];
                    (m != usize::MAX).then_some(m)
                })
            })
            .collect();
        SparseMatrixF3 {
            n_rows: rows.len(),
            n_cols: cols.len(),
            columns,
        }
    }

    /// Reduced row-echelon form by row elimination. Pivots are the leading
    /// columns of the reduced rows; the result is canonical.
    pub fn rref(&self) -> Rref {
        let rows = self.transpose().columns;
        let mut pivot_rows: BTreeMap<usize, SparseVector> = BTreeMap::new();
        for mut row in rows {
            while let Some((lead, v)) = row.leading() {
                match pivot_rows.get(&lead) {
                    Some(p) => row.add_scaled(-v, p),
                    None => break,
                }
            }
            if let Some((lead, v)) = row.leading() {
                row.scale(v.inv().expect("leading entry is nonzero"));
                pivot_rows.insert(lead, row);
            }
        }
        // back substitution, in increasing pivot order
        let pivots: Vec<usize> = pivot_rows.keys().copied().collect();
        for &pc in &pivots {
            let p = pivot_rows[&pc].clone();
            for (&other, row) in pivot_rows.iter_mut() {
                if other == pc {
                    continue;
                }
                let v = row.get(pc);
                if !v.is_zero() {
                    row.add_scaled(-v, &p);
                }
            }
        }
        let rank = pivots.len();
        let mut reduced = SparseMatrixF3::zeros(self.n_rows, self.n_cols);
        let mut triplets = Vec::new();
        for (r, row) in pivot_rows.values().enumerate() {
            for &(c, v) in row.entries() {
                triplets.push((r, c, v));
            }
        }
        if !triplets.is_empty() {
            reduced = SparseMatrixF3::from_triplets(self.n_rows, self.n_cols, triplets)
                .expect("indices in range");
        }
        Rref {
            matrix: reduced,
            rank,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        ColumnSpace::new(self.n_rows, self.columns.iter().cloned(), false).rank()
    }

    /// A basis of the null space, one vector per non-pivot column.
    pub fn kernel_basis(&self) -> Vec<SparseVector> {
        ColumnSpace::new(self.n_rows, self.columns.iter().cloned(), true).into_kernel()
    }

    pub fn solve_in_image(&self, v: &SparseVector) -> Result<ImageSolution, LinalgError> {
        ColumnSpace::new(self.n_rows, self.columns.iter().cloned(), true).solve(v)
    }

    pub fn is_rref(&self) -> bool {
        let rows = self.transpose();
        let mut last_lead: Option<usize> = None;
        let mut seen_zero = false;
        let mut leads = Vec::new();
        for row in rows.columns() {
            match row.leading() {
                None => seen_zero = true,
                Some((c, v)) => {
                    if seen_zero || v != F3::ONE || last_lead.is_some_and(|l| c <= l) {
                        return false;
                    }
                    last_lead = Some(c);
                    leads.push(c);
                }
            }
        }
        leads.iter().all(|&c| self.columns[c].nnz() == 1)
    }

    /// Canonical text form: `GF3MAT v1 <rows> <cols> <nnz>` then one
    /// `row col val` line per entry, sorted by `(col, row)`.
    pub fn to_text(&self) -> String {
        let mut out = format!("GF3MAT v1 {} {} {}\n", self.n_rows, self.n_cols, self.nnz());
        for (r, c, v) in self.triplets() {
            out.push_str(&format!("{r} {c} {v}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, LinalgError> {
        let err = |m: &str| LinalgError::Parse(m.to_string());
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| err("empty input"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 5 || h[0] != "GF3MAT" || h[1] != "v1" {
            return Err(err("bad header"));
        }
        let parse = |s: &str| s.parse::<usize>().map_err(|_| err("bad integer"));
        let (rows, cols, nnz) = (parse(h[2])?, parse(h[3])?, parse(h[4])?);
        let mut triplets = Vec::with_capacity(nnz);
        let mut prev: Option<(usize, usize)> = None;
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(err("entry line must have three fields"));
            }
            let (r, c, v) = (parse(f[0])?, parse(f[1])?, parse(f[2])?);
            if v == 0 || v > 2 {
                return Err(err("entry value must be 1 or 2"));
            }
            if prev.is_some_and(|p| p >= (c, r)) {
                return Err(err("entries not strictly sorted by (col, row)"));
            }
            prev = Some((c, r));
            triplets.push((r, c, F3::new(v as i64)));
        }
        if triplets.len() != nnz {
            return Err(err("entry count disagrees with header"));
        }
        Self::from_triplets(rows, cols, triplets)
    }
}

/// Column space of a list of vectors, built by column elimination while
/// recording which combination of input columns produced each basis vector.
///
/// Basis vectors are fully reduced against each other, so each pivot row
/// carries exactly one basis vector with entry 1 there.
#[derive(Clone, Debug)]
pub struct ColumnSpace {
    n_rows: usize,
    n_cols: usize,
    track: bool,
    // pivot row -> (reduced vector, combination of input columns)
    basis: BTreeMap<usize, (SparseVector, SparseVector)>,
    kernel: Vec<SparseVector>,
}

impl ColumnSpace {
    pub fn new(n_rows: usize, columns: impl IntoIterator<Item = SparseVector>, track: bool) -> Self {
        let mut space = ColumnSpace {
            n_rows,
            n_cols: 0,
            track,
            basis: BTreeMap::new(),
            kernel: Vec::new(),
        };
        for c in columns {
            space.push(c);
        }
        space
    }

    /// Appends a column; returns `true` if it enlarged the span.
    pub fn push(&mut self, column: SparseVector) -> bool {
        let idx = self.n_cols;
        self.n_cols += 1;
        let mut combo = if self.track {
            SparseVector::unit(idx)
        } else {
            SparseVector::new()
        };
        let v = self.reduce_with(column, &mut combo);
        match v.leading() {
            None => {
                if self.track {
                    self.kernel.push(combo);
                }
                false
            }
            Some((lead, s)) => {
                let inv = s.inv().expect("nonzero");
                let mut v = v;
                v.scale(inv);
                combo.scale(inv);
                // keep the basis fully reduced at the new pivot row
                for (vec, comb) in self.basis.values_mut() {
                    let t = vec.get(lead);
                    if !t.is_zero() {
                        vec.add_scaled(-t, &v);
                        if self.track {
                            comb.add_scaled(-t, &combo);
                        }
                    }
                }
                self.basis.insert(lead, (v, combo));
                true
            }
        }
    }

    fn reduce_with(&self, mut v: SparseVector, combo: &mut SparseVector) -> SparseVector {
        // since the basis is fully reduced, one pass over pivot rows suffices
        let hits: Vec<(usize, F3)> = v
            .entries()
            .iter()
            .filter(|(r, _)| self.basis.contains_key(r))
            .copied()
            .collect();
        for (r, coef) in hits {
            let (bv, bc) = &self.basis[&r];
            v.add_scaled(-coef, bv);
            if self.track {
                combo.add_scaled(-coef, bc);
            }
        }
        v
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn pivot_rows(&self) -> Vec<usize> {
        self.basis.keys().copied().collect()
    }

    pub fn contains(&self, v: &SparseVector) -> bool {
        let mut scratch = SparseVector::new();
        let probe = ColumnSpace {
            track: false,
            ..self.shallow()
        };
        probe.reduce_with(v.clone(), &mut scratch).is_zero()
    }

    fn shallow(&self) -> ColumnSpace {
        ColumnSpace {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            track: self.track,
            basis: self.basis.clone(),
            kernel: Vec::new(),
        }
    }

    /// Canonical reduction of `v` modulo the span.
    pub fn residual(&self, v: &SparseVector) -> SparseVector {
        let mut scratch = SparseVector::new();
        let mut probe = self.shallow();
        probe.track = false;
        probe.reduce_with(v.clone(), &mut scratch)
    }

    pub fn solve(&self, v: &SparseVector) -> Result<ImageSolution, LinalgError> {
        if let Some(i) = v.max_index() {
            if i >= self.n_rows {
                return Err(LinalgError::DimensionMismatch {
                    expected: self.n_rows,
                    found: i + 1,
                });
            }
        }
        assert!(self.track, "solve needs a tracking column space");
        let mut combo = SparseVector::new();
        let rest = self.reduce_with(v.clone(), &mut combo);
        if rest.is_zero() {
            combo.scale(-F3::ONE);
            Ok(ImageSolution::InImage(combo))
        } else {
            Ok(ImageSolution::NotInImage { residual: rest })
        }
    }

    pub fn kernel(&self) -> &[SparseVector] {
        &self.kernel
    }

    pub fn into_kernel(self) -> Vec<SparseVector> {
        self.kernel
    }
}

/// Dimension-checked solve against an explicit row count.
pub fn solve_in_image(m: &SparseMatrixF3, v: &SparseVector, v_len: usize) -> Result<ImageSolution, LinalgError> {
    if v_len != m.n_rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.n_rows(),
            found: v_len,
        });
    }
    m.solve_in_image(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic() {
        assert_eq!(F3::ONE + F3::TWO, F3::ZERO);
        assert_eq!(F3::TWO * F3::TWO, F3::ONE);
        assert_eq!(F3::TWO.inv(), Some(F3::TWO));
        assert_eq!(F3::ZERO.inv(), None);
        assert_eq!(F3::new(-1), F3::TWO);
        assert_eq!(-F3::ONE, F3::TWO);
    }

    #[test]
    fn rref_identity_and_zero() {
        let r = SparseMatrixF3::identity(2).rref();
        assert_eq!((r.rank, r.pivots.clone()), (2, vec![0, 1]));
        let z = SparseMatrixF3::zeros(2, 2).rref();
        assert_eq!((z.rank, z.pivots.len()), (0, 0));
    }

    #[test]
    fn rref_dependent_rows() {
        // (2,1) = 2 * (1,2)
        let m = SparseMatrixF3::from_rows(&[vec![1, 2], vec![2, 1]]);
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
        assert!(r.matrix.is_rref());
        assert_eq!(r.matrix.get(0, 1), F3::TWO);
    }

    #[test]
    fn kernel_examples() {
        let m = SparseMatrixF3::from_rows(&[vec![1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        let v = k[0].to_dense(2);
        // proportional to (1, 2)
        assert_eq!(v[1], v[0] * F3::TWO);
        assert!(!v[0].is_zero());

        assert!(SparseMatrixF3::identity(3).kernel_basis().is_empty());
        let zk = SparseMatrixF3::zeros(3, 3).kernel_basis();
        assert_eq!(zk, (0..3).map(SparseVector::unit).collect::<Vec<_>>());
    }

    #[test]
    fn solve_examples() {
        let id = SparseMatrixF3::identity(3);
        let v = SparseVector::from_dense(&[F3::TWO, F3::ZERO, F3::ONE]);
        assert_eq!(id.solve_in_image(&v).unwrap(), ImageSolution::InImage(v.clone()));

        let z = SparseMatrixF3::zeros(3, 3);
        assert_eq!(
            z.solve_in_image(&v).unwrap(),
            ImageSolution::NotInImage { residual: v.clone() }
        );

        let m = SparseMatrixF3::from_rows(&[vec![1, 2], vec![2, 1]]);
        let target = SparseVector::from_dense(&[F3::TWO, F3::ONE]);
        let x = m.solve_in_image(&target).unwrap();
        let x = x.solution().expect("(2,1) is the second column");
        assert_eq!(m.mul_vec(x).unwrap(), target);
    }

    #[test]
    fn solve_dimension_mismatch_is_an_error() {
        let m = SparseMatrixF3::identity(2);
        let v = SparseVector::unit(5);
        assert!(matches!(
            m.solve_in_image(&v),
            Err(LinalgError::DimensionMismatch { .. })
        ));
        assert!(solve_in_image(&m, &SparseVector::new(), 3).is_err());
    }

    #[test]
    fn text_roundtrip_and_rejects() {
        let m = SparseMatrixF3::from_rows(&[vec![0, 1, 2], vec![1, 0, 0]]);
        let t = m.to_text();
        assert!(t.starts_with("GF3MAT v1 2 3 3\n"));
        assert_eq!(t, "GF3MAT v1 2 3 3\n1 0 1\n0 1 1\n0 2 2\n");
        assert_eq!(SparseMatrixF3::from_text(&t).unwrap(), m);
        assert!(SparseMatrixF3::from_text("GF3MAT v1 2 2 1\n0 0 3\n").is_err());
        assert!(SparseMatrixF3::from_text("GF3MAT v2 2 2 0\n").is_err());
        assert!(SparseMatrixF3::from_text("GF3MAT v1 2 2 2\n0 1 1\n0 0 1\n").is_err());
        assert!(SparseMatrixF3::from_text("GF3MAT v1 2 2 1\n5 0 1\n").is_err());
    }

    #[test]
    fn from_triplets_rejects_out_of_range() {
        assert!(SparseMatrixF3::from_triplets(2, 2, [(2, 0, F3::ONE)]).is_err());
        let m = SparseMatrixF3::from_triplets(2, 2, [(0, 0, F3::ONE), (0, 0, F3::TWO)]).unwrap();
        assert_eq!(m.nnz(), 0);
    }
}
