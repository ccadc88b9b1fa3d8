//! Exact linear algebra on bigraded Jacobian rings of curves on the
//! quadric surface P^1 x P^1, with rank certification for infinitesimal
//! variations of Hodge structure.
//!
//! A curve of bidegree `(d, e)` is the zero locus of a bihomogeneous
//! polynomial `F`. The graded pieces of the Jacobian ideal of `F` and of
//! its quotient ring are finite-dimensional vector spaces, and the facts
//! this crate certifies are all statements about their dimensions and
//! about ranks of multiplication and duality pairings between them:
//!
//! - [`bipoly`]: exact sparse bihomogeneous polynomial arithmetic with a
//!   deterministic monomial order, parsing and printing;
//! - [`linalg`]: reduced row echelon form, kernels, canonical spans and
//!   quotient coordinates over the working field;
//! - [`field`]: the two scalar backends, arbitrary-precision rationals and
//!   a 31-bit prime field;
//! - [`jacobian`]: graded pieces of the Jacobian ideal and ring, Hilbert
//!   data, smoothness certification and finite-scheme lengths;
//! - [`diffop`]: the basis of twisted first-order-operator sections and
//!   the differential applied to it, an independent construction of the
//!   same ideal used as a cross-check;
//! - [`ivhs`]: the trace functional on the top graded piece, duality
//!   pairings, the symmetric forms attached to embedded deformations, and
//!   the certification pipeline for maximal infinitesimal variation;
//! - [`report`] and [`config`]: deterministic JSON reports and run
//!   configuration for the command-line interface.

pub mod bipoly;
pub mod cli;
pub mod config;
pub mod diffop;
pub mod error;
pub mod field;
pub mod ivhs;
pub mod jacobian;
pub mod linalg;
pub mod parse;
pub mod report;

pub use bipoly::{euler_defect, monomial_basis, BiDegree, BiPoly, Monomial, Var};
pub use error::Error;
pub use field::{Field, PrimeField, Rationals, DEFAULT_PRIME};
pub use jacobian::CurveContext;
pub use parse::parse_bipoly;
