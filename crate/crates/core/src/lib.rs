//! Exact closed forms for the moments of the duration of fair gambler's ruin
//! games with two or three players.
//!
//! The derivation pipeline runs entirely over exact rationals:
//!
//! 1. [`ansatz`] solves the binomial-moment recurrence order by order, using a
//!    polynomial ansatz with undetermined coefficients and an exact linear
//!    solve from [`algebra::linear`].
//! 2. [`transforms`] turns binomial moments into raw and central moments and
//!    extracts the limits of the scaled central moments at equal capitals.
//! 3. [`oracle`] gives ground truth at fixed numeric capitals by solving the
//!    absorbing chain directly, and [`sim`] cross-checks everything by Monte
//!    Carlo.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod ansatz;
mod error;
pub mod oracle;
pub mod sim;
pub mod transforms;

pub use algebra::{Monomial, MultiPoly, Rational, RationalFormula};
pub use error::{Error, Result};
