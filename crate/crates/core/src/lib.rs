//! Decorated diagram algebras for the generalized Temperley–Lieb algebras of types B̃ₙ₊₁ and D̃ₙ₊₂.

pub mod admissible;
pub mod algebra;
pub mod catalog;
pub mod coxeter;
pub mod diagram;
pub mod enumerate;
pub mod error;
pub mod factor;
pub mod heap;
pub mod poly;
pub mod render;
pub mod verify;

pub use coxeter::{CoxeterSpec, Family, Word};
pub use error::{Error, Result};
pub use diagram::{Decoration, Diagram, Edge, Node};
pub use heap::{FamilyTag, Heap, HeapFamily};
pub use poly::DeltaPoly;
