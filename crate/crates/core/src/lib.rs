//! Computational tools for free groups, surface groups and their dense
//! representations in `SO(3)` and `SL(2,ℝ)`.
//!
//! * [`word`]: reduced words in free groups.
//! * [`presentation`]: surface-group presentations and Dehn's algorithm.
//! * [`homomorphism`]: generator-image homomorphisms and the eventually
//!   faithful families built from Dehn twists and conjugation.
//! * [`baumslag`]: nontriviality of `u^{n1}a1⋯u^{nk}ak` for large exponents.
//! * [`repr`]: matrix representations, deformation along closures of cyclic
//!   subgroups, and finite-scale freeness / density certificates.

pub mod ball;
pub mod baumslag;
pub mod error;
pub mod exec;
pub mod homomorphism;
pub mod presentation;
pub mod repr;
pub mod symbol;
pub mod word;

pub use error::{Error, Result};
pub use presentation::{Presentation, PresentationKind, SurfaceForm};
pub use symbol::Gen;
pub use word::{parse_word, Letter, Word};
