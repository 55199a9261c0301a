//! Conversions between binomial, raw and central moments, and limits of the
//! scaled central moments when all capitals are equal.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{Rational, RationalFormula};
use crate::{Error, Result};

/// Triangular table of Stirling numbers of the second kind `S(i, j)`,
/// `0 <= j <= i <= capacity`.
#[derive(Clone, Debug)]
pub struct StirlingTable {
    rows: Vec<Vec<BigUint>>,
}

impl StirlingTable {
    pub fn new(capacity: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(capacity + 1);
        rows.push(alloc::vec![BigUint::one()]);
        for i in 1..=capacity {
            let prev = &rows[i - 1];
            let mut row = alloc::vec![BigUint::zero(); i + 1];
            for j in 1..=i {
                let stay = if j < i {
                    &prev[j] * BigUint::from(j)
                } else {
                    BigUint::zero()
                };
                row[j] = stay + &prev[j - 1];
            }
            rows.push(row);
        }
        StirlingTable { rows }
    }

    pub fn capacity(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, i: usize, j: usize) -> Result<&BigUint> {
        if j > i {
            return Err(Error::Domain("stirling2 requires j <= i"));
        }
        self.rows
            .get(i)
            .map(|row| &row[j])
            .ok_or(Error::Domain("stirling2 index beyond table capacity"))
    }
}

/// `S(i, j)`, the number of partitions of an `i`-set into `j` blocks.
pub fn stirling2(i: usize, j: usize) -> Result<BigUint> {
    if j > i {
        return Err(Error::Domain("stirling2 requires j <= i"));
    }
    StirlingTable::new(i).get(i, j).cloned()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MomentKind {
    /// `E[C(D, i)]`, starting at order 0.
    Binomial,
    /// `E[D^i]`, starting at order 1.
    Raw,
    /// `E[(D - mu)^i]`, starting at order 1.
    Central,
}

impl MomentKind {
    pub fn first_order(self) -> usize {
        match self {
            MomentKind::Binomial => 0,
            MomentKind::Raw | MomentKind::Central => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MomentKind::Binomial => "binomial",
            MomentKind::Raw => "raw",
            MomentKind::Central => "central",
        }
    }
}

/// Moment formulas of one kind for orders `first_order..=max_order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentSet {
    players: usize,
    kind: MomentKind,
    formulas: Vec<RationalFormula>,
    mean: Option<RationalFormula>,
}

impl MomentSet {
    /// Binomial moments `f_0, f_1, ...`; `f_0` must be the constant 1.
    pub fn binomial(players: usize, formulas: Vec<RationalFormula>) -> Result<Self> {
        let first = formulas.first().ok_or(Error::IncompleteInput(0))?;
        if first != &RationalFormula::one(players) {
            return Err(Error::Domain("binomial moment of order 0 must be 1"));
        }
        Self::checked(players, MomentKind::Binomial, formulas, None)
    }

    /// Raw moments `E[D], E[D^2], ...`.
    pub fn raw(players: usize, formulas: Vec<RationalFormula>) -> Result<Self> {
        Self::checked(players, MomentKind::Raw, formulas, None)
    }

    fn checked(
        players: usize,
        kind: MomentKind,
        formulas: Vec<RationalFormula>,
        mean: Option<RationalFormula>,
    ) -> Result<Self> {
        if let Some(f) = formulas.iter().chain(&mean).find(|f| f.vars() != players) {
            return Err(Error::Shape {
                expected: players,
                found: f.vars(),
            });
        }
        Ok(MomentSet {
            players,
            kind,
            formulas,
            mean,
        })
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn kind(&self) -> MomentKind {
        self.kind
    }

    /// Highest order present; for an empty raw or central set this is 0.
    pub fn max_order(&self) -> usize {
        (self.kind.first_order() + self.formulas.len()).saturating_sub(1)
    }

    pub fn get(&self, order: usize) -> Option<&RationalFormula> {
        order
            .checked_sub(self.kind.first_order())
            .and_then(|i| self.formulas.get(i))
    }

    /// `(order, formula)` pairs in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &RationalFormula)> + '_ {
        let first = self.kind.first_order();
        self.formulas
            .iter()
            .enumerate()
            .map(move |(i, f)| (first + i, f))
    }

    /// `E[D]`, stored alongside central moments.
    pub fn mean(&self) -> Option<&RationalFormula> {
        self.mean.as_ref()
    }
}

/// `E[D^i] = sum_j j! S(i, j) f_j`.
pub fn binomial_to_raw(binomial: &MomentSet) -> Result<MomentSet> {
    if binomial.kind != MomentKind::Binomial {
        return Err(Error::Domain("binomial_to_raw expects binomial moments"));
    }
    if binomial.get(0).is_none() {
        return Err(Error::IncompleteInput(0));
    }
    let top = binomial.max_order();
    let stirling = StirlingTable::new(top);
    let mut raw = Vec::with_capacity(top);
    for i in 1..=top {
        let mut acc = RationalFormula::zero(binomial.players);
        let mut factorial = BigUint::one();
        for j in 1..=i {
            factorial *= BigUint::from(j);
            let weight = &factorial * stirling.get(i, j)?;
            let f = binomial.get(j).ok_or(Error::IncompleteInput(j))?;
            acc = acc.try_add(&f.scale(&Rational::from_integer(BigInt::from(weight))))?;
        }
        raw.push(acc);
    }
    MomentSet::raw(binomial.players, raw)
}

/// `m_i = sum_j C(i, j) (-mu)^(i-j) E[D^j]` with `E[D^0] = 1`.
pub fn raw_to_central(raw: &MomentSet) -> Result<MomentSet> {
    if raw.kind != MomentKind::Raw {
        return Err(Error::Domain("raw_to_central expects raw moments"));
    }
    let mean = raw.get(1).ok_or(Error::IncompleteInput(1))?.clone();
    let top = raw.max_order();
    let neg_mean = mean.neg();
    let mut neg_mean_powers = Vec::with_capacity(top + 1);
    neg_mean_powers.push(RationalFormula::one(raw.players));
    for p in 1..=top {
        let next = neg_mean_powers[p - 1].try_mul(&neg_mean)?;
        neg_mean_powers.push(next);
    }

    let mut central = Vec::with_capacity(top);
    central.push(RationalFormula::zero(raw.players));
    for i in 2..=top {
        let mut acc = neg_mean_powers[i].clone();
        let mut binom = BigInt::one();
        for j in 1..=i {
            binom = binom * BigInt::from(i - j + 1) / BigInt::from(j);
            let raw_j = raw.get(j).ok_or(Error::IncompleteInput(j))?;
            let term = neg_mean_powers[i - j]
                .try_mul(raw_j)?
                .scale(&Rational::from_integer(binom.clone()));
            acc = acc.try_add(&term)?;
        }
        central.push(acc);
    }
    MomentSet::checked(raw.players, MomentKind::Central, central, Some(mean))
}

/// Limit of the scaled central moment `m_i / m_2^(i/2)` as all capitals grow
/// together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactScaledLimit {
    pub order: usize,
    /// Exact square of the limit.
    pub squared_value: Rational,
    /// The limit itself when it is rational (always for even orders).
    pub exact: Option<Rational>,
    /// Decimal rendering with the requested number of significant digits.
    pub decimal: String,
}

/// Guard digits carried through the integer square root before rounding.
const GUARD_DIGITS: u32 = 5;

pub fn scaled_limit(central: &MomentSet, order: usize, digits: u32) -> Result<ExactScaledLimit> {
    if order < 3 {
        return Err(Error::Domain("scaled limits start at order 3"));
    }
    if central.kind != MomentKind::Central {
        return Err(Error::Domain("scaled_limit expects central moments"));
    }
    let leading = |i: usize| -> Result<Rational> {
        let f = central.get(i).ok_or(Error::IncompleteInput(i))?;
        let (deg, c) = f.leading_univariate()?;
        let expected = 2 * i as i64;
        if deg != expected {
            return Err(Error::DegenerateLeading {
                order: i,
                found: deg,
                expected,
            });
        }
        Ok(c)
    };
    let c2 = leading(2)?;
    let ci = leading(order)?;
    let squared_value = &ci * &ci / num_traits::pow(c2, order);
    let exact = rational_sqrt(&squared_value);
    let decimal = match &exact {
        Some(r) => rational_to_decimal(r, digits),
        None => sqrt_to_decimal(&squared_value, digits),
    };
    Ok(ExactScaledLimit {
        order,
        squared_value,
        exact,
        decimal,
    })
}

/// `sqrt(x)` when it is rational.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().magnitude();
    let d = x.denom().magnitude();
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Rational::new(BigInt::from(rn), BigInt::from(rd)))
}

/// Decimal position of the leading digit: `floor(log10(v))` for `v > 0`
/// given `v = sqrt(x)` (`root = true`) or `v = x`.
fn decimal_exponent(x: &Rational, root: bool) -> i64 {
    let n = x.numer().magnitude();
    let d = x.denom().magnitude();
    let ten = BigUint::from(10u32);
    let pow = if root { 2 } else { 1 };
    // v >= 10^e  <=>  n >= d * 10^(pow*e)
    let mut e: i64 = 0;
    if n >= d {
        let mut bound = d * num_traits::pow(ten.clone(), pow);
        while n >= &bound {
            e += 1;
            bound *= num_traits::pow(ten.clone(), pow);
        }
    } else {
        let mut scaled = n.clone();
        while &scaled < d {
            e -= 1;
            scaled *= num_traits::pow(ten.clone(), pow);
        }
    }
    e
}

fn fraction_digits(x: &Rational, root: bool, digits: u32) -> u32 {
    let e = decimal_exponent(x, root);
    (i64::from(digits.max(1)) - 1 - e).max(0) as u32
}

/// Renders a non-negative rational with `digits` significant digits,
/// rounding half away from zero. The integer part is never truncated.
pub fn rational_to_decimal(x: &Rational, digits: u32) -> String {
    if x.is_zero() {
        return String::from("0");
    }
    let frac = fraction_digits(x, false, digits);
    let scale = num_traits::pow(BigUint::from(10u32), frac as usize);
    let n = x.numer().magnitude() * &scale;
    let d = x.denom().magnitude();
    let (q, r) = n.div_rem(d);
    let rounded = if r * 2u32 >= *d { q + 1u32 } else { q };
    place_point(&rounded, frac, x.is_negative())
}

/// Renders `sqrt(x)` for `x >= 0` with `digits` significant digits via an
/// integer square root carrying guard digits, rounding half away from zero.
pub fn sqrt_to_decimal(x: &Rational, digits: u32) -> String {
    assert!(!x.is_negative(), "square root of a negative rational");
    if x.is_zero() {
        return String::from("0");
    }
    let frac = fraction_digits(x, true, digits);
    let shift = 2 * (frac + GUARD_DIGITS) as usize;
    let scaled = x.numer().magnitude() * num_traits::pow(BigUint::from(10u32), shift)
        / x.denom().magnitude();
    let root = scaled.sqrt();
    let guard = num_traits::pow(BigUint::from(10u32), GUARD_DIGITS as usize);
    let (q, r) = root.div_rem(&guard);
    let rounded = if r * 2u32 >= guard { q + 1u32 } else { q };
    place_point(&rounded, frac, false)
}

fn place_point(n: &BigUint, frac: u32, negative: bool) -> String {
    let mut digits = n.to_str_radix(10);
    let frac = frac as usize;
    if digits.len() <= frac {
        let pad = frac + 1 - digits.len();
        digits.insert_str(0, &"0".repeat(pad));
    }
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    let split = digits.len() - frac;
    out.push_str(&digits[..split]);
    if frac > 0 {
        let _ = write!(out, ".{}", &digits[split..]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{frac, int, Monomial, MultiPoly};

    #[test]
    fn stirling_examples() {
        assert_eq!(stirling2(1, 1).unwrap(), BigUint::from(1u32));
        assert_eq!(stirling2(3, 2).unwrap(), BigUint::from(3u32));
        assert_eq!(stirling2(4, 2).unwrap(), BigUint::from(7u32));
        assert_eq!(stirling2(0, 0).unwrap(), BigUint::from(1u32));
        assert_eq!(stirling2(5, 0).unwrap(), BigUint::zero());
        assert!(matches!(stirling2(2, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn stirling_table_recurrence() {
        let t = StirlingTable::new(30);
        for i in 1..=30 {
            assert_eq!(t.get(i, 1).unwrap(), &BigUint::one());
            assert_eq!(t.get(i, i).unwrap(), &BigUint::one());
            assert!(t.get(i, 0).unwrap().is_zero());
            for j in 1..i {
                let expect =
                    t.get(i - 1, j).unwrap() * BigUint::from(j) + t.get(i - 1, j - 1).unwrap();
                assert_eq!(t.get(i, j).unwrap(), &expect);
            }
        }
        // Bell number B(10) = 115975
        let bell: BigUint = (0..=10).map(|j| t.get(10, j).unwrap().clone()).sum();
        assert_eq!(bell, BigUint::from(115_975u32));
    }

    fn constants(players: usize, values: &[Rational]) -> Vec<RationalFormula> {
        values
            .iter()
            .map(|v| RationalFormula::from_poly(MultiPoly::constant(players, v.clone())))
            .collect()
    }

    #[test]
    fn deterministic_variable() {
        // D == 3: binomial moments C(3, j)
        let b = MomentSet::binomial(2, constants(2, &[int(1), int(3), int(3), int(1), int(0)]))
            .unwrap();
        let raw = binomial_to_raw(&b).unwrap();
        for i in 1..=4 {
            let want = int(3i64.pow(i as u32));
            assert_eq!(raw.get(i).unwrap(), &constants(2, &[want])[0]);
        }
        let central = raw_to_central(&raw).unwrap();
        for i in 1..=4 {
            assert!(central.get(i).unwrap().is_zero(), "order {i}");
        }
        assert_eq!(central.mean(), raw.get(1));
    }

    #[test]
    fn two_player_low_orders() {
        // f_1 = AB, f_2 = (E[D^2] - E[D]) / 2 with E[D^2] = Var + mean^2
        let ab = MultiPoly::term(2, Monomial::new(&[1, 1]), int(1));
        let var = MultiPoly::from_terms(
            2,
            [
                (Monomial::new(&[3, 1]), frac(1, 3)),
                (Monomial::new(&[1, 3]), frac(1, 3)),
                (Monomial::new(&[1, 1]), frac(-2, 3)),
            ],
        );
        let second = &var + &(&ab * &ab);
        let f2 = (&second - &ab).scale(&frac(1, 2));
        let b = MomentSet::binomial(
            2,
            alloc::vec![RationalFormula::one(2), ab.clone().into(), f2.into()],
        )
        .unwrap();
        let raw = binomial_to_raw(&b).unwrap();
        assert_eq!(raw.get(1).unwrap(), &RationalFormula::from(ab));
        assert_eq!(raw.get(2).unwrap(), &RationalFormula::from(second));
        let central = raw_to_central(&raw).unwrap();
        assert!(central.get(1).unwrap().is_zero());
        assert_eq!(central.get(2).unwrap(), &RationalFormula::from(var));
    }

    #[test]
    fn incomplete_and_wrong_kind() {
        assert_eq!(
            MomentSet::binomial(2, Vec::new()),
            Err(Error::IncompleteInput(0))
        );
        let raw = MomentSet::raw(2, Vec::new()).unwrap();
        assert_eq!(raw_to_central(&raw), Err(Error::IncompleteInput(1)));
        assert!(binomial_to_raw(&raw).is_err());
        assert!(matches!(
            MomentSet::raw(3, constants(2, &[int(1)])),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(
            rational_to_decimal(&frac(309, 35), 20),
            "8.8285714285714285714"
        );
        assert_eq!(
            rational_to_decimal(&frac(579, 70), 20),
            "8.2714285714285714286"
        );
        assert_eq!(sqrt_to_decimal(&frac(96, 25), 20), "1.9595917942265424786");
        assert_eq!(sqrt_to_decimal(&frac(169, 50), 20), "1.8384776310850235634");
        assert_eq!(sqrt_to_decimal(&int(2), 5), "1.4142");
        assert_eq!(sqrt_to_decimal(&frac(1, 100), 3), "0.100");
        assert_eq!(rational_to_decimal(&frac(2, 3), 3), "0.667");
        assert_eq!(rational_to_decimal(&int(12345), 3), "12345");
        assert_eq!(rational_to_decimal(&frac(-1, 2), 2), "-0.50");
        assert_eq!(rational_sqrt(&frac(95481, 1225)), Some(frac(309, 35)));
        assert_eq!(rational_sqrt(&frac(96, 25)), None);
    }

    #[test]
    fn scaled_limit_requires_matching_degree() {
        // m_2 = A^2 B^2, m_3 = A*B: degree 2, not 6
        let m2 = RationalFormula::from_poly(MultiPoly::term(2, Monomial::new(&[2, 2]), int(1)));
        let m3 = RationalFormula::from_poly(MultiPoly::term(2, Monomial::new(&[1, 1]), int(1)));
        let set = MomentSet::checked(
            2,
            MomentKind::Central,
            alloc::vec![RationalFormula::zero(2), m2, m3],
            Some(RationalFormula::zero(2)),
        )
        .unwrap();
        assert_eq!(
            scaled_limit(&set, 3, 20),
            Err(Error::DegenerateLeading {
                order: 3,
                found: 2,
                expected: 6
            })
        );
        assert!(matches!(scaled_limit(&set, 2, 20), Err(Error::Domain(_))));
        assert_eq!(scaled_limit(&set, 4, 20), Err(Error::IncompleteInput(4)));
    }
}
