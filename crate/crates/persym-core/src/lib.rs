//! Exact rank statistics for families of n-times persymmetric matrices over GF(2).
//!
//! The objects of study are 2n x k binary matrices built from n stacked 2 x k
//! Hankel blocks, each block determined by k+1 coefficient bits. This crate
//! counts family members by rank (an exhaustive census), evaluates the known
//! closed forms for those counts, checks the moment identities that link the
//! census to solution counts of bilinear polynomial systems, and reproduces
//! the linear-algebra derivation that pins down the closed-form coefficients.
//!
//! Everything is exact: counts are big integers, moment comparisons are big
//! rationals, and no check ever goes through floating point.
//!
//! Module map:
//! - [`gf2`]: bit-packed GF(2) matrices and the rank kernel.
//! - [`family`]: the parameter model (coefficient tuples <-> indices <-> matrices).
//! - [`census`]: exhaustive rank histograms over whole parameter ranges.
//! - [`forms`]: closed-form evaluators for the rank counts.
//! - [`moments`]: power-sum identities satisfied by every census.
//! - [`polysys`]: brute-force solution counts and character sums for the
//!   associated polynomial systems.
//! - [`derive`]: reproduction of the coefficient derivation for the quintuple
//!   (n = 5) closed forms from vanishing conditions and moment balances.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod census;
pub mod derive;
pub mod family;
pub mod forms;
pub mod gf2;
pub mod moments;
pub mod polysys;

mod error;

pub use error::Error;

pub type Result<T> = core::result::Result<T, Error>;
