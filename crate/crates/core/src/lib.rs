//! Chiral 4-polytopes whose automorphism group is PSL(2,q) or PGL(2,q).

pub mod arith;
pub mod classifier;
pub mod conjecture;
pub mod constructions;
pub mod enumerator;
pub mod error;
pub mod field;
pub mod projective;
pub mod polytope;
pub mod schreier;
pub mod subgroup;
pub mod tables;

pub use error::{Error, Result};
pub use field::{FieldCtx, FieldElement};
pub use projective::{GroupKind, Pgl, ProjElement, ProjPoint};
