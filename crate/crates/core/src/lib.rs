//! Exact arithmetic for topological modular forms with level structure.
//!
//! The crate computes, without any floating point:
//!
//! - level invariants of the modular curves `X_1(n)` ([`levels`]),
//! - ranks of `H^0` and `H^1` of the powers of `omega` and the Hilbert series of
//!   the ring of modular forms ([`cohomology`]),
//! - descent spectral sequence charts, slices and the Anderson-duality rank
//!   symmetry ([`charts`]),
//! - suspension multiplicities of module splittings ([`splitting`]),
//! - the Anderson self-duality classification ([`duality`]),
//! - regular `RO(C_2)`-graded homotopy fixed point spectral sequences ([`hfpss`]),
//! - the component bookkeeping of `TMF^G` for finite abelian `G` ([`equivariant`]).
//!
//! The [`cli`] module exposes everything as subcommands of the `tmf-level` binary.

pub mod charts;
pub mod cli;
pub mod cohomology;
pub mod duality;
pub mod equivariant;
mod error;
pub mod hfpss;
pub mod levels;
pub mod poly;
pub mod splitting;

pub use error::{Error, Result};
pub use num_rational::Rational64;
