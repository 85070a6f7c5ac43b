//! Cayley digraphs of finite Abelian groups, their minimum distance
//! diagrams, and exact diameter bounds derived from solid density.
//!
//! Groups are kept in invariant-factor form `Z_{s_1} ⊕ ... ⊕ Z_{s_d}` with
//! `s_1 | s_2 | ... | s_d`, and generators carry integer lifts so that
//! dilation `mΓ` is well defined.

pub mod abelian;
pub mod cayley;
pub mod density;
mod error;
pub mod kappa;
pub mod literal;
pub mod mdd;
pub mod zmatrix;

pub use abelian::{GroupElement, InvariantFactors};
pub use cayley::{CayleyDigraph, DigraphLiteral, DistanceProfile};
pub use density::{Flagged, Rational, TightnessCoefficient};
pub use error::{Error, Result};
pub use kappa::{KappaCache, KappaOutcome, KappaRecord, SearchOptions, Symmetry};
pub use mdd::{LShape, Mdd, Point};
pub use zmatrix::{IntMatrix, SnfDecomposition};
