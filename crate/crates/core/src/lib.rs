//! Exact cohomology engine for the differential graded algebra V̄ over F3
//! whose cohomology is Cotor over H*(E6) at the prime 3.

pub mod algebra;
pub mod cohomology;
pub mod differential;
pub mod expr;
pub mod gf3;
pub mod partial;
pub mod relations;
pub mod spectral;

pub use algebra::{DegreeBasis, Element, FiltrationScheme, Gen, Letter, Monomial};
pub use differential::{Differential, SignConvention};
pub use gf3::{SparseMatrixF3, SparseVector, F3};
pub use partial::{NamedGen, NamedGenerators, PolyElement, SignTable};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
