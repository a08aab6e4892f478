//! Exact calculus for the free bc–βγ vertex superalgebra on affine space.
//!
//! The crate is organised bottom-up:
//!
//! * [`conformal`] – normal forms, n-th products, λ-brackets and axiom checks.
//! * [`freefield`] – the chiral de Rham and chiral polyvector current sets.
//! * [`brst`] – the chiral critical locus of a homogeneous potential and its
//!   twisted topological currents.
//! * [`cohomology`] – finite graded slices, exact ranks, BV checks.
//! * [`characters`] – truncated q-series, theta quotients and localization.
//!
//! Every coefficient is an exact rational; there is no floating point anywhere
//! in the library.

pub mod brst;
pub mod characters;
pub mod cohomology;
pub mod conformal;
pub mod error;
pub mod freefield;
pub mod linalg;
pub mod polynomial;
pub mod rational;
pub mod report;

pub use error::{Error, Result};
pub use rational::Q;
