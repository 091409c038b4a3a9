//! Finite (reflexive) (X,M)-graphs: theories, presheaf graphs, limits,
//! exponentials and bridges to hypergraphs and power graphs.

pub mod algebra;
pub mod bridge;
pub mod bundle;
pub mod catalog;
pub mod dot;
pub mod error;
pub mod expo;
pub mod graph;
pub mod limits;
pub mod random;
pub mod theory;

pub use algebra::{build_standard_monoid, FiniteMonoid, MonoidKind, RightMSet};
pub use error::{Error, Result};
pub use graph::{representable, ArcKind, GraphMorphism, Representable, XMGraph};
pub use theory::{Obj, Theory, TheoryMorphism};
