//! Text and JSON formats for moment formulas, the shipped fixtures, and the
//! `ruin` command-line front end.

pub mod cli;
pub mod document;
pub mod text;

pub use cli::{run_cli, run_cli_with};
pub use document::{FixtureSet, FormulaDocument};
pub use text::{parse_canonical, parse_formula, render_canonical, ParseError};
