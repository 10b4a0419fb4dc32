//! Mod-2 Steenrod algebra engine.
//!
//! The crate provides, in dependency order:
//!
//! * [`algebra`] — the Steenrod algebra itself: Serre-Cartan composites,
//!   Adem rewriting to admissible normal form, excess, enumeration.
//! * [`f2`] — dense F_2 linear algebra (bit vectors/matrices, rank, kernels,
//!   row reduction with caller-chosen pivot priority).
//! * [`em`] — unstable cohomology of mod-2 Eilenberg-MacLane spaces in a
//!   bounded degree window, the doubling endomorphism and its kernel and
//!   cokernel bases.
//! * [`window`] — finite-dimensional degree windows of modules over the
//!   Steenrod algebra: the two-column quotient module, the Thom-class
//!   window, and the smash-product verification of the defining map.
//! * [`pd`] — Poincare duality algebras given by finite presentations: Wu
//!   classes, products, and the characteristic-number identities.
//! * [`report`] — machine-readable check reports with content digests.

pub mod algebra;
pub mod corpus;
pub mod em;
pub mod error;
pub mod f2;
pub mod pd;
pub mod report;
pub mod window;

pub use error::{Error, Result};
