//! Grassmannian codes and q-covering designs over finite fields.
//!
//! The crate computes exact bounds on the size of constant dimension codes
//! and q-covering designs, builds codes as matchings in the hypergraph whose
//! vertices are `(k - delta)`-subspaces and whose edges are `k`-subspaces,
//! converts between codes and coverings, constructs spreads, and searches
//! for cyclic codes. Small cases are checked by exhaustive enumeration.
//!
//! The guide in `book/` walks through the concepts; its code listings run
//! as doctests of this crate.

pub mod bounds;
pub mod code;
pub mod cyclic;
pub mod designs;
pub mod error;
pub mod ext;
pub mod field;
pub mod linalg;
pub mod matcher;
mod poly;
pub mod rng;
pub mod subspace;

pub use code::{CodeTag, SubspaceCode};
pub use cyclic::CyclicSpace;
pub use error::{Error, Result};
pub use ext::ExtFieldSpec;
pub use field::{FieldElement, FieldSpec};
pub use subspace::{Space, Subspace};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/subspaces.md")]
    mod subspaces {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/matchings.md")]
    mod matchings {}
    #[doc = include_str!("../../../book/src/designs.md")]
    mod designs {}
    #[doc = include_str!("../../../book/src/cyclic.md")]
    mod cyclic {}
}
