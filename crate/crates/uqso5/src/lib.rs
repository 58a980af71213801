//! Exact symbolic engine for U_q(so(5)) acting on the quantized coordinate
//! algebra of its generic dressing orbit.
//!
//! The crate computes with four layers, bottom up:
//!
//! * [`scalar`] — Laurent-polynomial coefficients in `q^(1/4)` and the
//!   symbolic parameters `sigma1`, `sigma2`, plus univariate rational
//!   functions for exact linear algebra after integer specialization.
//! * [`calgebra`] — the noncommutative coordinate algebra on generators
//!   `w1..w4` with normal-ordering multiplication.
//! * [`freeu`] — the free-word model of the enveloping algebra: generator
//!   alphabet, coproduct, counit, and the defining relations.
//! * [`action`] — the dressing transformation, the `phi` map, and the module
//!   action in both its closed form and its definitional form.
//!
//! On top, [`repmod`] builds finite-dimensional cyclic modules for integer
//! parameters and verifies the defining relations as operator identities;
//! [`parse`] supplies the expression language used by the command line.

pub mod action;
pub mod calgebra;
pub mod freeu;
pub mod parse;
pub mod repmod;
pub mod scalar;
