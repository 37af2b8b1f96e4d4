//! Exact representation theory of elementary abelian p-groups over finite
//! fields: modules, homs, syzygies, decompositions, restricted SL2 tilting
//! modules, rank varieties and the membership tests built on them.

pub mod conjecture;
pub mod decomp;
pub mod error;
pub mod field;
pub mod hom;
pub mod homological;
pub mod linalg;
pub mod module;
pub mod poly;
pub mod serial;
pub mod sl2;
pub mod suites;
pub mod varieties;

pub use error::{Error, Result};
pub use field::{Embedding, Fe, Field};
pub use linalg::Mat;
pub use module::{GradedModule, Module};
