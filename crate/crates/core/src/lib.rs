//! Computable Lie brackets for Frölicher groups.
//!
//! Tangent vectors are represented by scalar-generic curves, and the bracket
//! of `v = [c]`, `w = [d]` is read off the mixed second partial of the
//! commutator curve `γ(s,t) = c(s)d(t)c(s)⁻¹d(t)⁻¹` in a chart at the
//! identity. All derivatives come from exact arithmetic in the jet ring
//! `ℝ[σ,τ]/(σ²,τ²)`.
//!
//! Module map:
//! - [`jet`]: the jet ring, nested duals and matrices over both.
//! - [`smooth`]: scalar-generic programs, curves, functions, derivative
//!   extraction and the smoothness probe.
//! - [`space`]: space descriptors with finite generating sets, products,
//!   subsets and the builtin spaces.
//! - [`tangent`]: tangent vectors, the pairing, the tangent functor.
//! - [`group`]: group descriptors and the group structure of `TG`.
//! - [`lie`]: trivializations, the bracket, derivations and the
//!   verification suites.

pub mod error;
pub mod group;
pub mod jet;
pub mod lie;
pub mod smooth;
pub mod space;
pub mod tangent;

pub use error::{Error, Result};
