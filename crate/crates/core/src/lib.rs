//! Edgewise subdivision, culf maps and decomposition spaces for finite
//! (set-valued) simplicial sets and finite categories.
//!
//! The crate is organized bottom-up:
//!
//! - [`ordinal`]: monotone maps, the active-inert and epi-mono factorizations,
//!   and the twisting functor `Q[n] = [n]^op * [n]`.
//! - [`sset`]: truncated simplicial sets, simplicial maps, nerves, edgewise
//!   subdivision, décalage, slices and intervals.
//! - [`cat`]: finite categories, presheaves, discrete fibrations, twisted
//!   arrow categories and fundamental categories.
//! - [`elements`]: categories of elements and the natural maps `ξ` and `λ`.
//! - [`checkers`]: certificate-producing decision procedures.
//! - [`factorization`]: the comprehensive and the ambifinal-culf
//!   factorizations, and the untwisting equivalence.
//! - [`corpus`], [`io`], [`suite`]: built-in examples, JSON formats and the
//!   invariant suite run by the command-line tool.

pub mod cat;
pub mod checkers;
pub mod corpus;
pub mod elements;
pub mod error;
pub mod factorization;
pub mod io;
pub mod ordinal;
pub mod sset;
pub mod suite;

pub use error::{Error, Result};
