//! Iterated silting mutation of finite-dimensional algebras `KQ/I`.
//!
//! The engine builds the algebra from a quiver with relations, computes minimal
//! left approximations and mutation complexes in the homotopy category,
//! re-presents the resulting endomorphism algebras by quiver and relations, and
//! compares them with the original algebra up to isomorphism or socle
//! equivalence.

pub mod algebra;
pub mod complexes;
pub mod endo;
pub mod equivalence;
pub mod error;
pub mod examples;
pub mod explore;
pub mod field;
pub mod linalg;
pub mod mutation;
pub mod presentation;
pub mod proj;
pub mod quiver;
pub mod representations;
pub mod verify;

pub use algebra::{Algebra, AlgebraElement, BlockAlgebra};
pub use error::{Error, Result};
pub use field::{Field, FieldSpec, Fp, Rationals};
pub use presentation::{AlgebraPresentation, AnyPresentation, Relation, Term};
pub use quiver::{Arrow, Path, Quiver};
