//! Exact computations with rings of invariants of finite matrix groups and
//! the graded components of their local cohomology modules.
//!
//! Everything runs over ℚ or a single cyclotomic field ℚ(ζ_n); there is no
//! floating point anywhere in the computational path.

pub mod cech;
pub mod error;
pub mod field;
pub mod groebner;
pub mod group;
pub mod invariants;
pub mod koszul;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod text;

pub use cech::{CechEngine, CechPolicy, ComponentDim, Finiteness, Outcome, Status};
pub use error::{Error, Result};
pub use field::FieldElement;
pub use groebner::{groebner_basis, quotient_slice_dim, GroebnerBasis, GroebnerBudget};
pub use group::{close_group, MatrixGroup, DEFAULT_GROUP_CAP};
pub use invariants::{
    fundamental_invariants, noether_generators, FundamentalInvariants, HsopBudget, InvariantAlgebra,
};
pub use koszul::{GradedSliceModule, Operator};
pub use linalg::{Echelon, ExactMatrix, SparseVec};
pub use oracle::{hsop_limit_component, monomial_component, SimplicialComplex};
pub use poly::{Monomial, MonomialOrder, MultiPoly, OrderKind};
pub use text::{format_poly, parse_constant, parse_poly};
