//! Symbolic derivation of the binomial moments `f_i = E[C(D, i)]`.
//!
//! Expanding the duration generating function about `y = 1` and comparing
//! coefficients gives, for every order `i >= 1`,
//!
//! ```text
//! f_i(x) - w * sum_t f_i(x + t) = w * sum_t f_{i-1}(x + t)
//! ```
//!
//! where `t` ranges over the transfers (one player gives a dollar to
//! another) and `w = 1 / #transfers`. The boundary conditions make `f_i`
//! vanish whenever a capital is zero, so the ansatz is
//!
//! * two players: `f_i = A*B * q(A, B)`,
//! * three players: `f_i = A*B*C * q(A, B, C) / (A + B + C)`,
//!
//! with `q` a polynomial of degree `2i - 2` with undetermined coefficients.
//! The total capital is fixed by every transfer, so the three-player
//! equation is multiplied through by it and everything stays polynomial.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::linear::solve_exact_linear;
use crate::algebra::poly::permutations;
use crate::algebra::{Monomial, MultiPoly, Rational, RationalFormula};
use crate::transforms::{binomial_to_raw, raw_to_central, MomentSet};
use crate::{Error, Result};

fn check_players(players: usize) -> Result<()> {
    if players == 2 || players == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedPlayers { players })
    }
}

/// The one-step transfer structure of the fair game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceSpec {
    players: usize,
    transfers: Vec<Vec<i64>>,
    weight: Rational,
}

impl RecurrenceSpec {
    /// All ordered `(giver, receiver)` pairs, giver-major, each with
    /// probability `1 / (players * (players - 1))`.
    pub fn new(players: usize) -> Result<Self> {
        check_players(players)?;
        let mut transfers = Vec::new();
        for giver in 0..players {
            for receiver in (0..players).filter(|&r| r != giver) {
                let mut t = alloc::vec![0i64; players];
                t[giver] = -1;
                t[receiver] = 1;
                transfers.push(t);
            }
        }
        let weight = Rational::new(BigInt::one(), BigInt::from(transfers.len()));
        Ok(RecurrenceSpec {
            players,
            transfers,
            weight,
        })
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn transfers(&self) -> &[Vec<i64>] {
        &self.transfers
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    /// `w * sum_t p(x + t)`.
    fn average_shift(&self, p: &MultiPoly) -> MultiPoly {
        let mut acc = MultiPoly::zero(p.vars());
        for t in &self.transfers {
            acc = &acc + &p.shift(t).expect("transfer length matches players");
        }
        acc.scale(&self.weight)
    }

    /// Denominator power of the ansatz: `(A+B+C)^1` for three players.
    fn ansatz_denominator_power(&self) -> u32 {
        u32::from(self.players == 3)
    }

    /// `A*B` or `A*B*C`.
    fn prefactor(&self) -> Monomial {
        Monomial::new(&alloc::vec![1u16; self.players])
    }
}

/// Unknown cofactor basis for one order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnsatzBasis {
    players: usize,
    order: usize,
    /// One representative monomial per unknown, canonical order.
    monomials: Vec<Monomial>,
    /// The polynomial each unknown multiplies in `q`. Equal to the monomial
    /// itself for the full basis, or its orbit sum for the symmetric one.
    elements: Vec<MultiPoly>,
}

impl AnsatzBasis {
    pub fn players(&self) -> usize {
        self.players
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Degree bound of the cofactor `q`.
    pub fn cofactor_degree(&self) -> usize {
        (2 * self.order).saturating_sub(2)
    }

    /// `f_i` for the given values of the unknowns.
    pub fn formula(&self, coefficients: &[Rational]) -> RationalFormula {
        assert_eq!(coefficients.len(), self.len());
        let mut q = MultiPoly::zero(self.players);
        for (c, e) in coefficients.iter().zip(&self.elements) {
            q = &q + &e.scale(c);
        }
        let prefactor = Monomial::new(&alloc::vec![1u16; self.players]);
        RationalFormula::new(q.mul_monomial(&prefactor), u32::from(self.players == 3))
    }
}

fn monomials_up_to(vars: usize, degree: usize) -> Vec<Monomial> {
    let d = degree as u16;
    let mut out = Vec::new();
    match vars {
        2 => {
            for a in 0..=d {
                for b in 0..=d - a {
                    out.push(Monomial::new(&[a, b]));
                }
            }
        }
        3 => {
            for a in 0..=d {
                for b in 0..=d - a {
                    for c in 0..=d - a - b {
                        out.push(Monomial::new(&[a, b, c]));
                    }
                }
            }
        }
        _ => unreachable!("checked by caller"),
    }
    out.sort();
    out
}

/// Every monomial of total degree `<= 2i - 2` in the cofactor, canonical
/// order. Order 0 has no unknowns (`f_0 = 1`).
pub fn build_basis(players: usize, order: usize) -> Result<AnsatzBasis> {
    check_players(players)?;
    let monomials = if order == 0 {
        Vec::new()
    } else {
        monomials_up_to(players, 2 * order - 2)
    };
    let elements = monomials
        .iter()
        .map(|m| MultiPoly::term(players, *m, Rational::one()))
        .collect();
    Ok(AnsatzBasis {
        players,
        order,
        monomials,
        elements,
    })
}

/// Like [`build_basis`] but restricted to symmetric cofactors: one unknown
/// per orbit of monomials under permutations of the variables.
pub fn build_symmetric_basis(players: usize, order: usize) -> Result<AnsatzBasis> {
    let full = build_basis(players, order)?;
    let perms = permutations(players);
    let mut monomials = Vec::new();
    let mut elements = Vec::new();
    for m in full.monomials {
        let e = &m.exponents()[..players];
        if e.windows(2).any(|w| w[0] < w[1]) {
            continue;
        }
        let orbit: BTreeSet<Monomial> = perms.iter().map(|p| m.permute(p)).collect();
        monomials.push(m);
        elements.push(MultiPoly::from_terms(
            players,
            orbit.into_iter().map(|o| (o, Rational::one())),
        ));
    }
    Ok(AnsatzBasis {
        players,
        order,
        monomials,
        elements,
    })
}

/// Coefficient-comparison system for one order: one row per monomial of the
/// cleared residual, one column per unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub row_monomials: Vec<Monomial>,
    pub matrix: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
}

/// Builds the linear system whose solution makes the ansatz satisfy the
/// recurrence at order `basis.order()` given `f_prev = f_{i-1}`.
pub fn assemble_recurrence_system(
    spec: &RecurrenceSpec,
    basis: &AnsatzBasis,
    f_prev: &RationalFormula,
) -> Result<LinearSystem> {
    for found in [basis.players, f_prev.vars()] {
        if found != spec.players {
            return Err(Error::Shape {
                expected: spec.players,
                found,
            });
        }
    }
    let ansatz_power = spec.ansatz_denominator_power();
    let cleared = ansatz_power.max(f_prev.denominator_power());
    let total = MultiPoly::sum_of_vars(spec.players);
    let lift = |p: MultiPoly, from: u32| -> MultiPoly {
        match cleared - from {
            0 => p,
            k => &p * &total.pow(k),
        }
    };

    let prefactor = spec.prefactor();
    let columns: Vec<MultiPoly> = basis
        .elements
        .iter()
        .map(|e| {
            let numerator = e.mul_monomial(&prefactor);
            let applied = &numerator - &spec.average_shift(&numerator);
            lift(applied, ansatz_power)
        })
        .collect();
    let rhs_poly = lift(
        spec.average_shift(f_prev.numerator()),
        f_prev.denominator_power(),
    );

    let rows: BTreeSet<Monomial> = columns
        .iter()
        .chain(core::iter::once(&rhs_poly))
        .flat_map(|p| p.terms().map(|(m, _)| *m))
        .collect();
    let row_monomials: Vec<Monomial> = rows.into_iter().collect();
    let matrix = row_monomials
        .iter()
        .map(|m| {
            columns
                .iter()
                .map(|col| col.coefficient(m).cloned().unwrap_or_else(Rational::zero))
                .collect()
        })
        .collect();
    let rhs = row_monomials
        .iter()
        .map(|m| {
            rhs_poly
                .coefficient(m)
                .cloned()
                .unwrap_or_else(Rational::zero)
        })
        .collect();
    Ok(LinearSystem {
        row_monomials,
        matrix,
        rhs,
    })
}

/// Fully expanded residual of the recurrence for a candidate `f_i`, cleared
/// of denominators: `S^K (f_i - w sum f_i(x+t) - w sum f_{i-1}(x+t))`. The
/// zero polynomial certifies the candidate.
///
/// This works on whole formulas and never touches the assembled matrix, so
/// it is an independent check of the solve.
pub fn verify_residual(
    spec: &RecurrenceSpec,
    f_i: &RationalFormula,
    f_prev: &RationalFormula,
) -> Result<MultiPoly> {
    for found in [f_i.vars(), f_prev.vars()] {
        if found != spec.players {
            return Err(Error::Shape {
                expected: spec.players,
                found,
            });
        }
    }
    let shifted_sum = |f: &RationalFormula| -> Result<RationalFormula> {
        let mut acc = RationalFormula::zero(spec.players);
        for t in &spec.transfers {
            acc = acc.try_add(&f.shift(t)?)?;
        }
        Ok(acc.scale(&spec.weight))
    };
    let residual = f_i
        .try_sub(&shifted_sum(f_i)?)?
        .try_sub(&shifted_sum(f_prev)?)?;
    let power = residual
        .denominator_power()
        .max(f_i.denominator_power())
        .max(f_prev.denominator_power());
    Ok(residual.numerator_over(power))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DeriveOptions {
    /// Restrict the cofactor to symmetric polynomials. Off by default; the
    /// results are identical either way.
    pub symmetric_basis: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationResult {
    pub players: usize,
    pub max_order: usize,
    /// Kind `Binomial`, orders `0..=max_order`.
    pub binomial: MomentSet,
    /// Rank of the system solved at each order `1..=max_order`.
    pub system_ranks: Vec<usize>,
    /// Number of unknowns at each order `1..=max_order`.
    pub unknown_counts: Vec<usize>,
}

impl DerivationResult {
    pub fn raw(&self) -> Result<MomentSet> {
        binomial_to_raw(&self.binomial)
    }

    pub fn central(&self) -> Result<MomentSet> {
        raw_to_central(&self.raw()?)
    }
}

pub fn derive_binomial_moments(players: usize, max_order: usize) -> Result<DerivationResult> {
    derive_binomial_moments_with(players, max_order, DeriveOptions::default())
}

/// Solves for `f_1, ..., f_I` in turn. Fails with
/// [`Error::DerivationFailure`] if any order is not uniquely solvable, which
/// would mean the ansatz is too narrow.
pub fn derive_binomial_moments_with(
    players: usize,
    max_order: usize,
    options: DeriveOptions,
) -> Result<DerivationResult> {
    let spec = RecurrenceSpec::new(players)?;
    let mut formulas = alloc::vec![RationalFormula::one(players)];
    let mut system_ranks = Vec::with_capacity(max_order);
    let mut unknown_counts = Vec::with_capacity(max_order);
    for order in 1..=max_order {
        let basis = if options.symmetric_basis {
            build_symmetric_basis(players, order)?
        } else {
            build_basis(players, order)?
        };
        let system = assemble_recurrence_system(&spec, &basis, &formulas[order - 1])?;
        let report = solve_exact_linear(&system.matrix, &system.rhs)?;
        if !report.is_unique() {
            return Err(Error::DerivationFailure {
                order,
                report: Box::new(report),
            });
        }
        system_ranks.push(report.rank);
        unknown_counts.push(basis.len());
        let solution = report.solution.expect("unique solution present");
        formulas.push(basis.formula(&solution));
    }
    Ok(DerivationResult {
        players,
        max_order,
        binomial: MomentSet::binomial(players, formulas)?,
        system_ranks,
        unknown_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;

    #[test]
    fn basis_examples() {
        let b = build_basis(2, 1).unwrap();
        assert_eq!(b.monomials(), &[Monomial::ONE]);
        let b = build_basis(3, 1).unwrap();
        assert_eq!(b.len(), 1);
        let b = build_basis(2, 2).unwrap();
        let shown: Vec<_> = b
            .monomials()
            .iter()
            .map(|m| alloc::format!("{m}"))
            .collect();
        assert_eq!(shown, ["A^2", "A*B", "B^2", "A", "B", "1"]);
        assert!(build_basis(2, 0).unwrap().is_empty());
        assert_eq!(
            build_basis(4, 1),
            Err(Error::UnsupportedPlayers { players: 4 })
        );
    }

    #[test]
    fn basis_sizes() {
        fn binom(n: usize, k: usize) -> usize {
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        }
        for i in 1..=7 {
            let d = 2 * i - 2;
            assert_eq!(build_basis(2, i).unwrap().len(), binom(d + 2, 2));
            assert_eq!(build_basis(3, i).unwrap().len(), binom(d + 3, 3));
        }
    }

    #[test]
    fn recurrence_spec_structure() {
        for players in [2, 3] {
            let spec = RecurrenceSpec::new(players).unwrap();
            assert_eq!(
                spec.weight() * Rational::from_integer(BigInt::from(spec.transfers().len())),
                int(1)
            );
            for t in spec.transfers() {
                assert_eq!(t.iter().filter(|&&x| x == 1).count(), 1);
                assert_eq!(t.iter().filter(|&&x| x == -1).count(), 1);
                assert_eq!(t.iter().filter(|&&x| x == 0).count(), players - 2);
            }
        }
        assert_eq!(RecurrenceSpec::new(2).unwrap().transfers().len(), 2);
        assert_eq!(RecurrenceSpec::new(3).unwrap().transfers().len(), 6);
        assert!(RecurrenceSpec::new(5).is_err());
    }

    #[test]
    fn first_order_systems() {
        let spec = RecurrenceSpec::new(2).unwrap();
        let basis = build_basis(2, 1).unwrap();
        let sys = assemble_recurrence_system(&spec, &basis, &RationalFormula::one(2)).unwrap();
        // residual k - 1 on the constant monomial only
        assert_eq!(sys.row_monomials, [Monomial::ONE]);
        assert_eq!(sys.matrix, [[int(1)]]);
        assert_eq!(sys.rhs, [int(1)]);

        let spec = RecurrenceSpec::new(3).unwrap();
        let basis = build_basis(3, 1).unwrap();
        let sys = assemble_recurrence_system(&spec, &basis, &RationalFormula::one(3)).unwrap();
        let report = solve_exact_linear(&sys.matrix, &sys.rhs).unwrap();
        assert_eq!(report.solution, Some(alloc::vec![int(3)]));
    }

    #[test]
    fn residual_of_wrong_candidate() {
        let spec = RecurrenceSpec::new(2).unwrap();
        let candidate =
            RationalFormula::from_poly(MultiPoly::term(2, Monomial::new(&[1, 1]), int(2)));
        let r = verify_residual(&spec, &candidate, &RationalFormula::one(2)).unwrap();
        assert_eq!(r, MultiPoly::one(2));
    }

    #[test]
    fn engel_residual_is_zero() {
        let spec = RecurrenceSpec::new(3).unwrap();
        let engel = RationalFormula::new(MultiPoly::term(3, Monomial::new(&[1, 1, 1]), int(3)), 1);
        let r = verify_residual(&spec, &engel, &RationalFormula::one(3)).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn shape_mismatch() {
        let spec = RecurrenceSpec::new(3).unwrap();
        let basis = build_basis(3, 1).unwrap();
        assert!(assemble_recurrence_system(&spec, &basis, &RationalFormula::one(2)).is_err());
        assert!(
            verify_residual(&spec, &RationalFormula::one(2), &RationalFormula::one(3)).is_err()
        );
    }

    #[test]
    fn classics() {
        let d2 = derive_binomial_moments(2, 1).unwrap();
        assert_eq!(
            d2.binomial.get(1).unwrap(),
            &RationalFormula::from_poly(MultiPoly::term(2, Monomial::new(&[1, 1]), int(1)))
        );
        let d3 = derive_binomial_moments(3, 1).unwrap();
        assert_eq!(
            d3.binomial.get(1).unwrap(),
            &RationalFormula::new(MultiPoly::term(3, Monomial::new(&[1, 1, 1]), int(3)), 1)
        );
        assert_eq!(d3.system_ranks, [1]);
        let d0 = derive_binomial_moments(3, 0).unwrap();
        assert_eq!(d0.binomial.max_order(), 0);
    }

    #[test]
    fn symmetric_basis_gives_same_result() {
        for players in [2, 3] {
            let full = derive_binomial_moments(players, 3).unwrap();
            let sym = derive_binomial_moments_with(
                players,
                3,
                DeriveOptions {
                    symmetric_basis: true,
                },
            )
            .unwrap();
            assert_eq!(full.binomial, sym.binomial);
            assert!(sym
                .unknown_counts
                .iter()
                .zip(&full.unknown_counts)
                .all(|(s, f)| s < f || *f == 1));
        }
    }
}
