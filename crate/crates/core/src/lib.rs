//! Exact linear fractional transformations of continued fractions.
//!
//! Integer LFTs `x -> (Ax + B) / (Cx + D)` act on regular continued fractions.
//! For `|AD - BC| = 2` the tail of the image is predictable from parity
//! information alone; this crate computes those predictions, checks them
//! against a Gosper-style digit-streaming oracle, and evaluates the nonlinear
//! recurrences satisfied by the image's convergents.
//!
//! Module map:
//! - [`exact`]: matrices, LFTs and `R`/`L` words, generic over the integer scalar.
//! - [`cf`]: quotient streams, quasi-periodic forms and their text syntax, convergents, parity classes.
//! - [`gosper`]: the streaming transformation.
//! - [`det2`]: decomposition of determinant +-2 matrices and the commutation identities.
//! - [`tails`]: block rewriting and predicted tails.
//! - [`leaping`]: index functions, recurrences and leaping-convergent equalities.
//! - [`families`]: Hurwitz and Tasoev families.
//! - [`sample`]: seeded random instances.

pub mod cf;
pub mod det2;
pub mod error;
pub mod exact;
pub mod families;
pub mod gosper;
pub mod leaping;
pub mod report;
pub mod sample;
pub mod tails;

pub use error::{Error, Result};
pub use report::VerificationReport;

/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;
/// Normalized exact fraction.
pub type Rational = num_rational::BigRational;
/// 2x2 matrix over [`Integer`].
pub type Matrix = exact::Matrix2x2<Integer>;
/// Nonsingular LFT over [`Integer`].
pub type Transform = exact::Lft<Integer>;
/// Decomposition over [`Integer`].
pub type Decomposition = det2::Decomposition<Integer>;
