use alloc::collections::btree_map::{BTreeMap, Entry};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::monomial::{Monomial, MAX_VARS};
use super::Rational;
use crate::{Error, Result};

/// Canonical sparse polynomial over the rationals in two or three variables.
///
/// No stored coefficient is zero, so structural equality is polynomial
/// equality. Terms iterate in canonical (graded lexicographic) order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Exact `p (op) q`, failing when the variable counts differ.
pub fn poly_arith(op: PolyOp, p: &MultiPoly, q: &MultiPoly) -> Result<MultiPoly> {
    match op {
        PolyOp::Add => p.try_add(q),
        PolyOp::Sub => p.try_sub(q),
        PolyOp::Mul => p.try_mul(q),
    }
}

/// `p` with every variable `v` replaced by `v + offsets[v]`, expanded.
pub fn shift_substitute(p: &MultiPoly, offsets: &[i64]) -> Result<MultiPoly> {
    p.shift(offsets)
}

impl MultiPoly {
    pub fn zero(vars: usize) -> Self {
        assert!(
            (1..=MAX_VARS).contains(&vars),
            "unsupported variable count {vars}"
        );
        MultiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: Rational) -> Self {
        Self::term(vars, Monomial::ONE, c)
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn var(vars: usize, index: usize) -> Self {
        assert!(index < vars);
        Self::term(vars, Monomial::var(index), Rational::one())
    }

    pub fn term(vars: usize, m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(m, c);
        p
    }

    /// `A + B` or `A + B + C`: the total capital, invariant under every
    /// transfer.
    pub fn sum_of_vars(vars: usize) -> Self {
        Self::from_terms(vars, (0..vars).map(|v| (Monomial::var(v), Rational::one())))
    }

    /// Collects terms, merging like monomials and dropping zeros.
    pub fn from_terms<I>(vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .next()
            .map_or(-1, |m| i64::from(m.degree()))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Rational> {
        self.terms.get(m)
    }

    /// First term in canonical order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        assert!(
            m.arity() <= self.vars,
            "monomial {m} outside {} variables",
            self.vars
        );
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_shape(&self, other: &MultiPoly) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::Shape {
                expected: self.vars,
                found: other.vars,
            })
        }
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_shape(other)?;
        let mut out = MultiPoly::zero(self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.vars);
        }
        MultiPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(t, x)| (t.mul(m), x.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = MultiPoly::one(self.vars);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Replaces every variable `v` by `v + offsets[v]` and expands.
    pub fn shift(&self, offsets: &[i64]) -> Result<MultiPoly> {
        if offsets.len() != self.vars {
            return Err(Error::Shape {
                expected: self.vars,
                found: offsets.len(),
            });
        }
        if offsets.iter().all(|&d| d == 0) {
            return Ok(self.clone());
        }
        let max_exp = self
            .terms
            .keys()
            .flat_map(|m| m.exponents().iter().copied())
            .max()
            .unwrap_or(0) as usize;
        // expansions[v][e] = coefficients of (x_v + d_v)^e, indexed by power of x_v
        let expansions: Vec<Vec<Vec<BigInt>>> = offsets
            .iter()
            .map(|&d| binomial_expansions(d, max_exp))
            .collect();

        let mut out = MultiPoly::zero(self.vars);
        let mut partial: Vec<([u16; MAX_VARS], BigInt)> = Vec::new();
        let mut next = Vec::new();
        for (m, c) in &self.terms {
            partial.clear();
            partial.push(([0; MAX_VARS], BigInt::one()));
            for (v, expansion) in expansions.iter().enumerate() {
                let e = m.exponent(v) as usize;
                if e == 0 {
                    continue;
                }
                next.clear();
                for (exps, k) in &partial {
                    for (t, b) in expansion[e].iter().enumerate() {
                        if b.is_zero() {
                            continue;
                        }
                        let mut exps = *exps;
                        exps[v] = t as u16;
                        next.push((exps, k * b));
                    }
                }
                core::mem::swap(&mut partial, &mut next);
            }
            for (exps, k) in partial.drain(..) {
                out.add_term(Monomial::new(&exps), c * Rational::from_integer(k));
            }
        }
        Ok(out)
    }

    /// Exact value at `point`.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.vars {
            return Err(Error::Shape {
                expected: self.vars,
                found: point.len(),
            });
        }
        let max_exp = self
            .terms
            .keys()
            .flat_map(|m| m.exponents().iter().copied())
            .max()
            .unwrap_or(0) as usize;
        let powers: Vec<Vec<Rational>> = point
            .iter()
            .map(|x| {
                let mut row = Vec::with_capacity(max_exp + 1);
                row.push(Rational::one());
                for e in 1..=max_exp {
                    let p = &row[e - 1] * x;
                    row.push(p);
                }
                row
            })
            .collect();
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, row) in powers.iter().enumerate() {
                let e = m.exponent(v) as usize;
                if e > 0 {
                    t *= &row[e];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Renames variable `v` to `perm[v]`. `perm` must be a permutation of
    /// `0..vars`.
    pub fn permute(&self, perm: &[usize]) -> MultiPoly {
        assert_eq!(perm.len(), self.vars);
        MultiPoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.permute(perm), c.clone()))
                .collect(),
        }
    }

    /// Substitutes `var = 0`.
    pub fn vanish_var(&self, var: usize) -> MultiPoly {
        MultiPoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(var) == 0)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Exact quotient `self / divisor`, or `None` when `divisor` does not
    /// divide `self` (or is zero).
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        if divisor.vars != self.vars {
            return None;
        }
        let (lead_m, lead_c) = divisor.leading_term()?;
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.vars);
        // Leading terms multiply under any monomial order, so a remainder
        // whose leading term is not a multiple of the divisor's leading
        // monomial cannot be in the ideal.
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.checked_div(lead_m)?;
            let qc = c / lead_c;
            for (dm, dc) in &divisor.terms {
                rem.add_term(dm.mul(&qm), -(&qc * dc));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Coefficients of the univariate polynomial obtained by setting every
    /// variable to the same symbol, indexed by degree.
    pub fn collapse_to_univariate(&self) -> Vec<Rational> {
        let deg = self.degree();
        if deg < 0 {
            return Vec::new();
        }
        let mut out = vec![Rational::zero(); deg as usize + 1];
        for (m, c) in &self.terms {
            out[m.degree() as usize] += c;
        }
        out
    }

    /// `true` when `self` is unchanged by every permutation of its variables.
    pub fn is_symmetric(&self) -> bool {
        permutations(self.vars)
            .iter()
            .all(|perm| &self.permute(perm) == self)
    }
}

/// All permutations of `0..n` for `n <= 3`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    match n {
        1 => vec![vec![0]],
        2 => vec![vec![0, 1], vec![1, 0]],
        3 => vec![
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0],
        ],
        _ => panic!("unsupported variable count {n}"),
    }
}

/// Row `e` holds the coefficients of `(x + d)^e` by power of `x`.
fn binomial_expansions(d: i64, max_exp: usize) -> Vec<Vec<BigInt>> {
    let d = BigInt::from(d);
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(max_exp + 1);
    rows.push(vec![BigInt::one()]);
    for e in 1..=max_exp {
        let prev = &rows[e - 1];
        // (x + d) * prev
        let mut row = vec![BigInt::zero(); e + 1];
        for (t, c) in prev.iter().enumerate() {
            row[t + 1] += c;
            row[t] += c * &d;
        }
        rows.push(row);
    }
    rows
}

impl Add for &MultiPoly {
    type Output = MultiPoly;

    /// Panics on a variable-count mismatch; use [`MultiPoly::try_add`] to
    /// get an error instead.
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("variable-count mismatch")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("variable-count mismatch")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("variable-count mismatch")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        MultiPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}](", self.vars)?;
        if self.is_zero() {
            f.write_str("0")?;
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*{m}")?;
        }
        f.write_str(")")
    }
}
