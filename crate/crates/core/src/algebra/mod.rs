//! Exact rational scalars, canonical multivariate polynomials in the capitals
//! `A`, `B`, `C`, formulas over powers of the total capital, and exact linear
//! solving.

pub mod formula;
pub mod linear;
pub mod monomial;
pub mod poly;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use formula::{evaluate_formula, leading_univariate, RationalFormula};
pub use linear::{solve_exact_linear, ExactLu, SolutionReport, SolveStatus};
pub use monomial::Monomial;
pub use poly::{poly_arith, shift_substitute, MultiPoly, PolyOp};

/// The coefficient field. Always stored reduced with a positive denominator.
pub type Rational = BigRational;

/// Integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d` as a reduced rational. Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Variable names used for rendering, in canonical order.
pub const VAR_NAMES: [char; 3] = ['A', 'B', 'C'];
