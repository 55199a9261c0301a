//! `ruin` subcommands. Exit codes: 0 success, 1 mismatch or derivation
//! failure, 2 usage or input error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use ruin_core::algebra::{Rational, RationalFormula};
use ruin_core::ansatz::{derive_binomial_moments_with, DerivationResult, DeriveOptions};
use ruin_core::oracle::oracle_binomial_moments;
use ruin_core::sim::{ross_expectation, run_trials, GameConfig, StopRule};
use ruin_core::transforms::{scaled_limit, MomentKind, MomentSet};

use crate::document::{FixtureSet, FormulaDocument, Kind};
use crate::text::render_canonical;

#[derive(Parser, Debug)]
#[command(
    name = "ruin",
    version,
    about = "Exact moments of the duration of fair gambler's ruin"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Derive moment formulas symbolically.
    Derive {
        #[arg(long)]
        players: usize,
        #[arg(long)]
        max_order: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Binomial)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Restrict the ansatz to symmetric cofactors (same results, fewer unknowns).
        #[arg(long)]
        symmetric_basis: bool,
    },
    /// Re-derive and compare against a fixture file.
    Verify {
        #[arg(long)]
        players: usize,
        #[arg(long)]
        fixtures: PathBuf,
    },
    /// Exact binomial moments and ruin probabilities at fixed capitals.
    Oracle {
        #[arg(long, value_delimiter = ',', required = true)]
        capitals: Vec<i64>,
        #[arg(long)]
        max_order: usize,
    },
    /// Monte Carlo estimate of the duration.
    Simulate {
        #[arg(long, value_delimiter = ',', required = true)]
        capitals: Vec<i64>,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum)]
        stop_rule: StopRuleArg,
        #[arg(long, default_value_t = 4)]
        max_moment_order: usize,
    },
    /// Limits of the scaled central moments at equal capitals.
    Limits {
        #[arg(long)]
        players: usize,
        #[arg(long)]
        max_order: usize,
        #[arg(long, default_value_t = 20)]
        digits: u32,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Binomial,
    Raw,
    Central,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StopRuleArg {
    FirstRuin,
    LastSurvivor,
}

#[derive(Debug)]
enum Failure {
    /// Exit 1.
    Mismatch(String),
    /// Exit 2.
    Usage(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Usage(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Mismatch(m) | Failure::Usage(m) => m,
        }
    }
}

impl From<ruin_core::Error> for Failure {
    fn from(e: ruin_core::Error) -> Self {
        match e {
            ruin_core::Error::DerivationFailure { .. } => Failure::Mismatch(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, Failure>;

/// Runs the CLI against the process's stdout and stderr.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_cli_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI with explicit output streams; returns the exit code.
pub fn run_cli_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                2
            } else {
                let _ = write!(out, "{}", e.render());
                0
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> CliResult {
    match command {
        Command::Derive {
            players,
            max_order,
            kind,
            format,
            out: path,
            symmetric_basis,
        } => {
            let rendered = derive(players, max_order, kind, format, symmetric_basis)?;
            match path {
                Some(p) => fs::write(p, rendered)?,
                None => out.write_all(rendered.as_bytes())?,
            }
            Ok(())
        }
        Command::Verify { players, fixtures } => verify(players, &fixtures, out),
        Command::Oracle {
            capitals,
            max_order,
        } => oracle(&capitals, max_order, out),
        Command::Simulate {
            capitals,
            trials,
            seed,
            stop_rule,
            max_moment_order,
        } => simulate(&capitals, trials, seed, stop_rule, max_moment_order, out),
        Command::Limits {
            players,
            max_order,
            digits,
        } => limits(players, max_order, digits, out),
    }
}

fn derivation(
    players: usize,
    max_order: usize,
    symmetric_basis: bool,
) -> CliResult<DerivationResult> {
    Ok(derive_binomial_moments_with(
        players,
        max_order,
        DeriveOptions { symmetric_basis },
    )?)
}

fn label(kind: MomentKind, order: usize) -> String {
    match (kind, order) {
        (MomentKind::Binomial, i) => format!("f_{i}"),
        (MomentKind::Raw, 1) => "E[D]".to_string(),
        (MomentKind::Raw, i) => format!("E[D^{i}]"),
        (MomentKind::Central, i) => format!("m_{i}"),
    }
}

/// `(kind, order, formula)` lines of a moment set as printed by `derive`.
/// Central output leads with the mean and skips the identically zero `m_1`.
fn printable(set: &MomentSet) -> Vec<(MomentKind, usize, RationalFormula)> {
    let mut rows = Vec::new();
    match set.kind() {
        MomentKind::Central => {
            if let Some(mean) = set.mean() {
                rows.push((MomentKind::Raw, 1, mean.clone()));
            }
            rows.extend(
                set.iter()
                    .skip(1)
                    .map(|(i, f)| (MomentKind::Central, i, f.clone())),
            );
        }
        MomentKind::Binomial => {
            rows.extend(
                set.iter()
                    .skip(1)
                    .map(|(i, f)| (MomentKind::Binomial, i, f.clone())),
            );
        }
        MomentKind::Raw => rows.extend(set.iter().map(|(i, f)| (MomentKind::Raw, i, f.clone()))),
    }
    rows
}

fn derive(
    players: usize,
    max_order: usize,
    kind: KindArg,
    format: Format,
    symmetric_basis: bool,
) -> CliResult<String> {
    let d = derivation(players, max_order, symmetric_basis)?;
    let set = match kind {
        KindArg::Binomial => d.binomial,
        KindArg::Raw => d.raw()?,
        KindArg::Central => d.central()?,
    };
    let rows = printable(&set);
    let mut s = String::new();
    match format {
        Format::Text => {
            for (k, i, f) in &rows {
                s.push_str(&format!("{} = {}\n", label(*k, *i), render_canonical(f)));
            }
        }
        Format::Json => {
            let docs: Vec<FormulaDocument> = rows
                .iter()
                .map(|(k, i, f)| FormulaDocument::from_formula(Kind::from(*k), *i, f))
                .collect();
            s = serde_json::to_string_pretty(&docs).expect("documents serialize");
            s.push('\n');
        }
    }
    Ok(s)
}

fn verify(players: usize, path: &PathBuf, out: &mut dyn Write) -> CliResult {
    let fixtures =
        FixtureSet::load(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let entries: Vec<&FormulaDocument> = fixtures.for_players(players).collect();
    if entries.is_empty() {
        return Err(Failure::Usage(format!("no fixtures for {players} players")));
    }
    let top = entries.iter().map(|e| e.order).max().unwrap_or(0);
    let d = derivation(players, top, false)?;
    let binomial = d.binomial.clone();
    let raw = d.raw()?;
    let central = d.central()?;

    let mut mismatches = 0;
    for e in entries {
        let expected = e
            .to_formula()
            .map_err(|err| Failure::Usage(err.to_string()))?;
        let set = match e.kind {
            Kind::Binomial => &binomial,
            Kind::Raw => &raw,
            Kind::Central => &central,
        };
        let name = label(e.kind.into(), e.order);
        let derived = set
            .get(e.order)
            .ok_or_else(|| Failure::Usage(format!("{name} is not derivable")))?;
        if derived == &expected {
            writeln!(out, "match {name}")?;
        } else {
            mismatches += 1;
            match constant_ratio(&expected, derived) {
                Some(r) => writeln!(out, "MISMATCH {name}: fixture = {r} * derived")?,
                None => writeln!(
                    out,
                    "MISMATCH {name}: derived = {}",
                    render_canonical(derived)
                )?,
            }
        }
    }
    if mismatches > 0 {
        return Err(Failure::Mismatch(format!(
            "{mismatches} fixture(s) differ from the derivation"
        )));
    }
    Ok(())
}

/// `c` with `fixture == c * derived`, if the two differ by a constant.
fn constant_ratio(fixture: &RationalFormula, derived: &RationalFormula) -> Option<Rational> {
    let (_, fc) = fixture.numerator().leading_term()?;
    let (_, dc) = derived.numerator().leading_term()?;
    let c = fc / dc;
    (derived.scale(&c) == *fixture).then_some(c)
}

fn oracle(capitals: &[i64], max_order: usize, out: &mut dyn Write) -> CliResult {
    let r = oracle_binomial_moments(capitals, max_order)?;
    let joined: Vec<String> = r.capitals.iter().map(u32::to_string).collect();
    writeln!(out, "capitals = {}", joined.join(","))?;
    for (i, f) in r.binomial_moments.iter().enumerate().skip(1) {
        writeln!(out, "f_{i} = {f}")?;
    }
    for (p, prob) in r.first_ruin_probabilities.iter().enumerate() {
        writeln!(out, "P_first_ruin_{} = {prob}", p + 1)?;
    }
    if r.capitals.len() == 2 {
        for (p, prob) in r.first_ruin_probabilities.iter().rev().enumerate() {
            writeln!(out, "P_win_{} = {prob}", p + 1)?;
        }
    }
    Ok(())
}

/// Exact expected duration when a closed form is known.
fn reference_mean(capitals: &[i64], rule: StopRule) -> Option<Rational> {
    match (rule, capitals.len()) {
        (StopRule::LastSurvivor, _) | (StopRule::FirstRuin, 2) => ross_expectation(capitals).ok(),
        (StopRule::FirstRuin, 3) => {
            let product: i64 = capitals.iter().product();
            let total: i64 = capitals.iter().sum();
            Some(Rational::new(
                BigInt::from(3 * product),
                BigInt::from(total),
            ))
        }
        _ => None,
    }
}

fn simulate(
    capitals: &[i64],
    trials: u64,
    seed: u64,
    rule: StopRuleArg,
    max_moment_order: usize,
    out: &mut dyn Write,
) -> CliResult {
    let rule = match rule {
        StopRuleArg::FirstRuin => StopRule::FirstRuin,
        StopRuleArg::LastSurvivor => StopRule::LastSurvivor,
    };
    let caps: Vec<u32> = capitals
        .iter()
        .map(|&c| u32::try_from(c).map_err(|_| Failure::Usage(format!("invalid capital {c}"))))
        .collect::<CliResult<_>>()?;
    let config = GameConfig::new(caps, rule)?;
    let s = run_trials(&config, trials, seed, max_moment_order)?;
    writeln!(out, "trials = {}", s.trials)?;
    writeln!(out, "seed = {}", s.seed)?;
    writeln!(out, "stop_rule = {}", s.stop_rule.as_str())?;
    writeln!(out, "mean = {:?}", s.sample_mean)?;
    writeln!(out, "exact_mean = {}", s.exact_mean)?;
    writeln!(out, "standard_error = {:?}", s.standard_error_of_mean)?;
    writeln!(out, "variance = {:?}", s.sample_variance)?;
    if let Some(se) = s.standard_error_of_variance {
        writeln!(out, "variance_standard_error = {se:?}")?;
    }
    for (j, m) in s.sample_central_moments.iter().enumerate().skip(1) {
        writeln!(out, "m_{} = {m:?}", j + 1)?;
    }
    if let Some(r) = reference_mean(capitals, rule) {
        writeln!(out, "reference_mean = {r}")?;
    }
    for (p, c) in s.first_ruined_counts.iter().enumerate() {
        writeln!(out, "first_ruined_{} = {c}", p + 1)?;
    }
    for (p, c) in s.winner_counts.iter().enumerate() {
        writeln!(out, "winner_{} = {c}", p + 1)?;
    }
    Ok(())
}

fn limits(players: usize, max_order: usize, digits: u32, out: &mut dyn Write) -> CliResult {
    if max_order < 3 {
        return Err(Failure::Usage("--max-order must be at least 3".into()));
    }
    let central = derivation(players, max_order, false)?.central()?;
    for order in 3..=max_order {
        let l = scaled_limit(&central, order, digits)?;
        writeln!(out, "L_{order}^2 = {}", l.squared_value)?;
        if let Some(exact) = &l.exact {
            writeln!(out, "L_{order} = {exact}")?;
        }
        writeln!(out, "L_{order} ~ {}", l.decimal)?;
    }
    Ok(())
}
