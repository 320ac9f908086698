//! Frame analysis for Hilbert C*-modules over finite-dimensional
//! C*-algebras.
//!
//! The coefficient algebra is a direct sum of complex matrix blocks, a
//! module is an orthogonal summand `P(A^n)` of a free module, and a frame is
//! a finite family of module vectors whose frame operator is bounded above
//! and below. On top of that the crate provides:
//!
//! - frame transforms, optimal bounds, canonical and alternate duals, and
//!   the reconstruction identity ([`frame`]);
//! - dilation of tight frames to orthogonal module bases and of general
//!   frames to Riesz bases, with uniqueness certificates ([`dilation`]);
//! - the disjointness taxonomy of frame pairs via range projections, the
//!   nine equivalent characterizations of strong disjointness, and
//!   combination of disjoint tight frames ([`disjoint`]);
//! - operator and frame decompositions into unitaries, partial isometries,
//!   tight frames, orthonormal and Riesz bases ([`decomp`]);
//! - sampled-function instances over discretized function algebras:
//!   partition-of-unity frames on dyadic grids, the single-generator bound
//!   collapse, and bracket products of translate systems ([`wavelet`]);
//! - a text file format, seeded fixtures and report types used by the
//!   `mframe` command line tool ([`fileio`], [`fixture`]).
//!
//! The book under `book/` walks through the concepts chapter by chapter;
//! its code snippets compile and run as doctests of this crate.

pub mod algebra;
pub mod decomp;
pub mod dilation;
pub mod disjoint;
pub mod error;
pub mod fileio;
pub mod fixture;
pub mod frame;
mod linalg;
pub mod matrix;
pub mod module;
pub mod operator;
pub mod wavelet;

pub use algebra::{AlgElement, AlgebraDescriptor, SpectralFn};
pub use error::{Error, Result};
pub use frame::Frame;
pub use matrix::AlgMatrix;
pub use module::{HilbertModule, ModuleVector};
pub use operator::{ModuleOperator, OpPredicates};

/// Default relative tolerance for membership checks, spectral cut-offs and
/// certificate decisions.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Book chapters compiled as doctests, keeping the guide in sync with the
/// code.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/algebras.md")]
    mod algebras {}
    #[doc = include_str!("../../../book/src/modules.md")]
    mod modules {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/frames.md")]
    mod frames {}
    #[doc = include_str!("../../../book/src/dilation.md")]
    mod dilation {}
    #[doc = include_str!("../../../book/src/disjointness.md")]
    mod disjointness {}
    #[doc = include_str!("../../../book/src/decompositions.md")]
    mod decompositions {}
    #[doc = include_str!("../../../book/src/wavelets.md")]
    mod wavelets {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
