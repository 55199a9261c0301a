use alloc::boxed::Box;

use crate::algebra::linear::SolutionReport;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("variable-count mismatch: expected {expected}, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("zero denominator while evaluating a formula")]
    ZeroDenominator,
    #[error("leading term of the zero formula is undefined")]
    ZeroFormula,
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("incomplete input: order {0} is missing")]
    IncompleteInput(usize),
    #[error(
        "{players} players is unsupported: the polynomial-over-(sum of capitals) ansatz is only \
         known to work for two and three players"
    )]
    UnsupportedPlayers { players: usize },
    #[error("order {order}: recurrence system is not uniquely solvable ({report})")]
    DerivationFailure {
        order: usize,
        report: Box<SolutionReport>,
    },
    #[error("order {order}: equal-capital leading degree is {found}, expected {expected}")]
    DegenerateLeading {
        order: usize,
        found: i64,
        expected: i64,
    },
}
