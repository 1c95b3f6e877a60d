//! Cohomology of (V̄, d) degree by degree, the closed-form Poincaré series
//! it is checked against, and an explicit additive basis of classes.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{multiply, poly_exponents_of_degree, DegreeBasis, Element, Monomial};
use crate::differential::Differential;
use crate::gf3::{ColumnSpace, ImageSolution, SparseMatrixF3, SparseVector, F3};
use crate::partial::{NamedGen, NamedGenerators};

#[derive(Debug, Error)]
pub enum CohomologyError {
    #[error("degree {degree} is above the complex bound {bound}")]
    DegreeOutOfRange { degree: u32, bound: u32 },
    #[error("element is not homogeneous of degree {0}")]
    NotHomogeneous(u32),
    #[error("element is not a cocycle; d of it is {0}")]
    NotCocycle(String),
    #[error("cocycle is not in the span of the basis classes and coboundaries")]
    NotSpanned,
    #[error("basis check failed in degree {degree}: {detail}")]
    BasisCheck { degree: u32, detail: String },
}

/// Bases and differential matrices for degrees `0..=max_degree`.
#[derive(Clone, Debug)]
pub struct Complex {
    pub max_degree: u32,
    pub differential: Differential,
    bases: Vec<DegreeBasis>,
    matrices: Vec<SparseMatrixF3>,
    ranks: Vec<usize>,
}

impl Complex {
    pub fn new(max_degree: u32, differential: Differential) -> Self {
        let bases: Vec<DegreeBasis> = (0..=max_degree + 1)
            .into_par_iter()
            .map(DegreeBasis::new)
            .collect();
        let matrices: Vec<SparseMatrixF3> = (0..=max_degree as usize)
            .into_par_iter()
            .map(|n| differential.matrix(&bases[n], &bases[n + 1]))
            .collect();
        Self::from_parts(max_degree, differential, bases, matrices)
    }

    /// Uses externally supplied matrices (for instance from a cache).
    pub fn with_matrices(
        max_degree: u32,
        differential: Differential,
        matrices: Vec<SparseMatrixF3>,
    ) -> Self {
        let bases: Vec<DegreeBasis> = (0..=max_degree + 1)
            .into_par_iter()
            .map(DegreeBasis::new)
            .collect();
        Self::from_parts(max_degree, differential, bases, matrices)
    }

    fn from_parts(
        max_degree: u32,
        differential: Differential,
        bases: Vec<DegreeBasis>,
        matrices: Vec<SparseMatrixF3>,
    ) -> Self {
        let ranks = matrices.par_iter().map(|m| m.rank()).collect();
        Complex {
            max_degree,
            differential,
            bases,
            matrices,
            ranks,
        }
    }

    pub fn basis(&self, n: u32) -> &DegreeBasis {
        &self.bases[n as usize]
    }

    /// d: V̄_n → V̄_{n+1}.
    pub fn matrix(&self, n: u32) -> &SparseMatrixF3 {
        &self.matrices[n as usize]
    }

    pub fn matrices(&self) -> &[SparseMatrixF3] {
        &self.matrices
    }

    pub fn rank(&self, n: u32) -> usize {
        self.ranks[n as usize]
    }

    /// Rank of d into degree n (zero in degree 0).
    pub fn incoming_rank(&self, n: u32) -> usize {
        if n == 0 {
            0
        } else {
            self.ranks[n as usize - 1]
        }
    }

    pub fn homology_dim(&self, n: u32) -> usize {
        self.basis(n).dim() - self.rank(n) - self.incoming_rank(n)
    }

    pub fn homology_dims(&self) -> Vec<usize> {
        (0..=self.max_degree).map(|n| self.homology_dim(n)).collect()
    }

    fn check_degree(&self, n: u32) -> Result<(), CohomologyError> {
        if n > self.max_degree {
            Err(CohomologyError::DegreeOutOfRange {
                degree: n,
                bound: self.max_degree,
            })
        } else {
            Ok(())
        }
    }

    pub fn image_columns(&self, n: u32) -> Vec<SparseVector> {
        if n == 0 {
            Vec::new()
        } else {
            self.matrix(n - 1).columns().to_vec()
        }
    }

    /// Tests z ∈ im(d) in degree n; returns a preimage on success.
    pub fn preimage(&self, z: &Element, n: u32) -> Result<Option<Element>, CohomologyError> {
        self.check_degree(n)?;
        let v = z.to_vector(self.basis(n)).ok_or(CohomologyError::NotHomogeneous(n))?;
        if n == 0 {
            return Ok(v.is_zero().then(Element::zero));
        }
        let m = self.matrix(n - 1);
        match m.solve_in_image(&v).expect("dimensions agree") {
            ImageSolution::InImage(x) => Ok(Some(Element::from_vector(&x, self.basis(n - 1)))),
            ImageSolution::NotInImage { .. } => Ok(None),
        }
    }
}

/// A rational function Σ/Π(1 - t^k) with integer numerator.
#[derive(Clone, Debug, Serialize)]
pub struct PoincareSeries {
    pub name: &'static str,
    /// (exponent, coefficient)
    pub numerator: Vec<(u32, i64)>,
    pub denominator: Vec<u32>,
}

impl PoincareSeries {
    pub fn expand(&self, n: u32) -> Vec<i64> {
        let len = n as usize + 1;
        let mut c = vec![0i64; len];
        for &(e, k) in &self.numerator {
            if (e as usize) < len {
                c[e as usize] += k;
            }
        }
        for &k in &self.denominator {
            let k = k as usize;
            for i in k..len {
                c[i] += c[i - k];
            }
        }
        c
    }

    /// The commutative summand, tensored with F3[x36, x48, x54].
    pub fn c_part() -> Self {
        let mut numerator: Vec<(u32, i64)> = [0, 20, 22, 26, 40, 42, 44, 46, 48, 58, 60, 64, 76]
            .iter()
            .map(|&e| (e, 1))
            .collect();
        numerator.extend([30, 50, 56, 68].iter().map(|&e| (e, -1)));
        numerator.sort();
        PoincareSeries {
            name: "C",
            numerator,
            denominator: vec![4, 8, 10, 36, 48, 54],
        }
    }

    /// The word-positive summand, tensored with F3[x36, x48, x54].
    pub fn d_part() -> Self {
        PoincareSeries {
            name: "D",
            numerator: [9, 21, 25, 26, 27, 29, 30, 31, 34, 35, 36, 46, 47, 48, 52, 56]
                .iter()
                .map(|&e| (e, 1))
                .collect(),
            denominator: vec![26, 36, 48, 54],
        }
    }
}

/// Coefficients of the total Poincaré series up to t^n.
pub fn poincare_coeffs(n: u32) -> Vec<i64> {
    let c = PoincareSeries::c_part().expand(n);
    let d = PoincareSeries::d_part().expand(n);
    c.iter().zip(d).map(|(a, b)| a + b).collect()
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    C,
    D,
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisClass {
    pub label: String,
    pub side: Side,
    pub degree: u32,
    #[serde(skip)]
    pub rep: Element,
}

/// A module generator with the coefficient ring it is free over.
struct Family {
    side: Side,
    /// exponent slots among a4, a8, a10 allowed in the coefficient ring
    ring: &'static [usize],
    /// x26 exponents start here (D side only)
    x26_from: Option<u32>,
    generator: &'static [NamedGen],
}

fn families() -> Vec<Family> {
    use NamedGen::*;
    let mut out = Vec::new();
    let c1: [&'static [NamedGen]; 9] = [
        &[],
        &[Y20],
        &[Y20, Y20],
        &[Y22],
        &[Y22, Y22],
        &[Y20, Y22],
        &[Y58],
        &[Y60],
        &[Y76],
    ];
    for g in c1 {
        out.push(Family {
            side: Side::C,
            ring: &[0, 1, 2],
            x26_from: None,
            generator: g,
        });
    }
    let c2: [&'static [NamedGen]; 5] = [&[Y26], &[Y26, Y26], &[Y20, Y26], &[Y22, Y26], &[Y64]];
    for g in c2 {
        out.push(Family {
            side: Side::C,
            ring: &[1, 2],
            x26_from: None,
            generator: g,
        });
    }
    let d1: [&'static [NamedGen]; 8] = [&[], &[A4], &[A8], &[A10], &[Y20], &[Y22], &[A10, Y20], &[Y26]];
    for g in d1 {
        out.push(Family {
            side: Side::D,
            ring: &[],
            x26_from: Some(1),
            generator: g,
        });
    }
    let d2: [&'static [NamedGen]; 8] = [
        &[A9],
        &[Y21],
        &[Y25],
        &[Y27],
        &[Y21, A8],
        &[Y21, A10],
        &[Y25, A10],
        &[Y21, Y26],
    ];
    for g in d2 {
        out.push(Family {
            side: Side::D,
            ring: &[],
            x26_from: Some(0),
            generator: g,
        });
    }
    out
}

const X_CUBES: [(NamedGen, u32); 3] = [(NamedGen::X36, 36), (NamedGen::X48, 48), (NamedGen::X54, 54)];

fn x_monomials(n: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for i in 0..=n / 36 {
        for j in 0..=(n - 36 * i) / 48 {
            let rest = n - 36 * i - 48 * j;
            if rest % 54 == 0 {
                out.push([i, j, rest / 54]);
            }
        }
    }
    out
}

fn power_label(name: &str, e: u32) -> Option<String> {
    match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    }
}

/// Additive basis of H^n as products of named cocycles.
pub fn theorem21_basis(n: u32, gens: &NamedGenerators) -> Vec<BasisClass> {
    let names = ["a4", "a8", "a10"];
    let mut out = Vec::new();
    for fam in families() {
        let gen_deg: u32 = fam.generator.iter().map(|g| g.degree()).sum();
        if gen_deg > n {
            continue;
        }
        let module_gen = fam
            .generator
            .iter()
            .fold(Element::one(), |acc, g| multiply(&acc, &gens.rep(*g)));
        let gen_label: Vec<&str> = fam.generator.iter().map(|g| g.name()).collect();
        let rest = n - gen_deg;
        for xd in (0..=rest).filter(|xd| !x_monomials(*xd).is_empty()) {
            for xe in x_monomials(xd) {
                let coeff_deg = rest - xd;
                let x_rep = X_CUBES
                    .iter()
                    .zip(xe)
                    .fold(Element::one(), |acc, ((g, _), e)| {
                        multiply(&acc, &gens.rep(*g).pow(e))
                    });
                let x_label: Vec<String> = X_CUBES
                    .iter()
                    .zip(xe)
                    .filter_map(|((g, _), e)| power_label(g.name(), e))
                    .collect();
                let mut ring_terms: Vec<(Element, Vec<String>)> = Vec::new();
                match fam.x26_from {
                    None => {
                        for exps in poly_exponents_of_degree(coeff_deg, fam.ring) {
                            let label = (0..3)
                                .filter_map(|i| power_label(names[i], exps[i]))
                                .collect();
                            ring_terms.push((Element::from_monomial(Monomial::poly(exps)), label));
                        }
                    }
                    Some(from) => {
                        if coeff_deg % 26 == 0 && coeff_deg / 26 >= from {
                            let k = coeff_deg / 26;
                            let label = power_label("x26", k).into_iter().collect();
                            ring_terms.push((gens.rep(NamedGen::X26).pow(k), label));
                        }
                    }
                }
                for (ring, ring_label) in ring_terms {
                    let rep = multiply(&multiply(&ring, &module_gen), &x_rep);
                    let mut parts: Vec<String> = ring_label;
                    if !gen_label.is_empty() {
                        parts.push(gen_label.join(" "));
                    }
                    parts.extend(x_label.iter().cloned());
                    let label = if parts.is_empty() {
                        "1".to_string()
                    } else {
                        parts.join(" · ")
                    };
                    out.push(BasisClass {
                        label,
                        side: fam.side,
                        degree: n,
                        rep,
                    });
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisCheck {
    pub degree: u32,
    pub count: usize,
    pub homology_dim: usize,
    pub independent: bool,
    pub all_cocycles: bool,
}

impl BasisCheck {
    pub fn passed(&self) -> bool {
        self.count == self.homology_dim && self.independent && self.all_cocycles
    }
}

pub fn check_basis(complex: &Complex, n: u32, classes: &[BasisClass]) -> BasisCheck {
    let basis = complex.basis(n);
    let all_cocycles = classes
        .iter()
        .all(|c| complex.differential.apply(&c.rep).is_zero());
    let mut space = ColumnSpace::new(basis.dim(), complex.image_columns(n), false);
    let before = space.rank();
    for c in classes {
        space.push(c.rep.to_vector(basis).expect("degree n representative"));
    }
    BasisCheck {
        degree: n,
        count: classes.len(),
        homology_dim: complex.homology_dim(n),
        independent: space.rank() - before == classes.len(),
        all_cocycles,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassDecomposition {
    pub degree: u32,
    /// (basis index, coefficient) for nonzero coefficients
    pub coefficients: Vec<(usize, i64)>,
    #[serde(skip)]
    pub witness: Element,
}

impl ClassDecomposition {
    pub fn is_zero_class(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn reconstruct(&self, classes: &[BasisClass], d: &Differential) -> Element {
        let mut out = d.apply(&self.witness);
        for &(i, c) in &self.coefficients {
            out.add_scaled(F3::new(c), &classes[i].rep);
        }
        out
    }
}

/// Per-degree solver for z = Σ cᵢ βᵢ + d(x).
pub struct Decomposer<'a> {
    complex: &'a Complex,
    pub degree: u32,
    pub classes: Vec<BasisClass>,
    space: ColumnSpace,
}

impl<'a> Decomposer<'a> {
    pub fn new(complex: &'a Complex, n: u32, classes: Vec<BasisClass>) -> Result<Self, CohomologyError> {
        complex.check_degree(n)?;
        let basis = complex.basis(n);
        let mut cols: Vec<SparseVector> = classes
            .iter()
            .map(|c| c.rep.to_vector(basis).expect("degree n representative"))
            .collect();
        cols.extend(complex.image_columns(n));
        let space = ColumnSpace::new(basis.dim(), cols, true);
        Ok(Decomposer {
            complex,
            degree: n,
            classes,
            space,
        })
    }

    pub fn decompose(&self, z: &Element) -> Result<ClassDecomposition, CohomologyError> {
        let n = self.degree;
        let basis = self.complex.basis(n);
        let v = z.to_vector(basis).ok_or(CohomologyError::NotHomogeneous(n))?;
        let dz = self.complex.differential.apply(z);
        if !dz.is_zero() {
            return Err(CohomologyError::NotCocycle(dz.to_string()));
        }
        let k = self.classes.len();
        match self.space.solve(&v).expect("dimensions agree") {
            ImageSolution::NotInImage { .. } => Err(CohomologyError::NotSpanned),
            ImageSolution::InImage(x) => {
                let mut coefficients = Vec::new();
                let mut pre = Vec::new();
                for &(i, c) in x.entries() {
                    if i < k {
                        coefficients.push((i, c.signed()));
                    } else {
                        pre.push((i - k, c));
                    }
                }
                let witness = if n == 0 {
                    Element::zero()
                } else {
                    Element::from_vector(&SparseVector::from_pairs(pre), self.complex.basis(n - 1))
                };
                Ok(ClassDecomposition {
                    degree: n,
                    coefficients,
                    witness,
                })
            }
        }
    }
}

/// One-shot decomposition of a cocycle against the additive basis.
pub fn decompose_class(
    complex: &Complex,
    gens: &NamedGenerators,
    z: &Element,
    n: u32,
) -> Result<(Vec<BasisClass>, ClassDecomposition), CohomologyError> {
    let dec = Decomposer::new(complex, n, theorem21_basis(n, gens))?;
    let out = dec.decompose(z)?;
    Ok((dec.classes, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_low_coefficients() {
        assert_eq!(poincare_coeffs(12), vec![1, 0, 0, 0, 1, 0, 0, 0, 2, 1, 1, 0, 2]);
        assert!(poincare_coeffs(200).iter().all(|&c| c >= 0));
    }

    #[test]
    fn homology_low_degrees() {
        let cx = Complex::new(30, Differential::default());
        let dims: Vec<i64> = cx.homology_dims().iter().map(|&d| d as i64).collect();
        assert_eq!(dims, poincare_coeffs(30));
    }

    #[test]
    fn basis_examples() {
        let gens = NamedGenerators::standard();
        let labels = |n| -> Vec<String> {
            theorem21_basis(n, &gens).into_iter().map(|c| c.label).collect()
        };
        assert_eq!(labels(0), vec!["1"]);
        assert_eq!(labels(9), vec!["a9"]);
        let l20 = labels(20);
        assert_eq!(l20.len(), 5);
        for want in ["y20", "a4^5", "a4^3 · a8", "a4 · a8^2", "a10^2"] {
            let compact = want.replace(" · ", " ");
            assert!(
                l20.iter().any(|l| l.replace(" · ", " ") == compact),
                "{want} missing from {l20:?}"
            );
        }
    }

    #[test]
    fn decomposition_examples() {
        let gens = NamedGenerators::standard();
        let cx = Complex::new(46, Differential::default());
        let d = cx.differential;
        let w = gens.eval("b12 b16^2");
        let z = d.apply(&w);
        let (classes, dec) = decompose_class(&cx, &gens, &z, 45).unwrap();
        assert!(dec.is_zero_class());
        assert_eq!(dec.reconstruct(&classes, &d), z);

        let y20 = gens.rep(NamedGen::Y20);
        let (classes, dec) = decompose_class(&cx, &gens, &y20, 20).unwrap();
        assert_eq!(dec.coefficients.len(), 1);
        assert_eq!(classes[dec.coefficients[0].0].label, "y20");
        assert!(dec.witness.is_zero());

        let rel = gens.eval("a4 y26 - a8 y22 - a10 y20");
        assert!(rel.is_zero());

        assert!(matches!(
            decompose_class(&cx, &gens, &gens.eval("b12"), 12),
            Err(CohomologyError::NotCocycle(_))
        ));
    }
}
