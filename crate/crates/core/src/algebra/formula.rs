use core::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::MultiPoly;
use super::Rational;
use crate::{Error, Result};

/// `numerator / S^k` where `S` is the sum of the variables (the total
/// capital).
///
/// Canonical: whenever `k > 0` and `S` divides the numerator, the factor is
/// cancelled, so equality of formulas is structural equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFormula {
    numerator: MultiPoly,
    denominator_power: u32,
}

impl RationalFormula {
    pub fn new(numerator: MultiPoly, denominator_power: u32) -> Self {
        let mut f = RationalFormula {
            numerator,
            denominator_power,
        };
        f.cancel();
        f
    }

    pub fn from_poly(numerator: MultiPoly) -> Self {
        RationalFormula {
            numerator,
            denominator_power: 0,
        }
    }

    pub fn zero(vars: usize) -> Self {
        Self::from_poly(MultiPoly::zero(vars))
    }

    pub fn one(vars: usize) -> Self {
        Self::from_poly(MultiPoly::one(vars))
    }

    fn cancel(&mut self) {
        if self.numerator.is_zero() {
            self.denominator_power = 0;
            return;
        }
        if self.denominator_power == 0 {
            return;
        }
        let total = MultiPoly::sum_of_vars(self.vars());
        while self.denominator_power > 0 {
            match self.numerator.div_exact(&total) {
                Some(q) => {
                    self.numerator = q;
                    self.denominator_power -= 1;
                }
                None => break,
            }
        }
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.numerator
    }

    pub fn denominator_power(&self) -> u32 {
        self.denominator_power
    }

    pub fn vars(&self) -> usize {
        self.numerator.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn into_parts(self) -> (MultiPoly, u32) {
        (self.numerator, self.denominator_power)
    }

    /// The numerator rescaled to sit over `S^power`. Panics if `power` is
    /// below the current denominator power.
    pub fn numerator_over(&self, power: u32) -> MultiPoly {
        assert!(power >= self.denominator_power);
        let extra = power - self.denominator_power;
        if extra == 0 {
            return self.numerator.clone();
        }
        &self.numerator * &MultiPoly::sum_of_vars(self.vars()).pow(extra)
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.vars() == other.vars() {
            Ok(())
        } else {
            Err(Error::Shape {
                expected: self.vars(),
                found: other.vars(),
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let k = self.denominator_power.max(other.denominator_power);
        Ok(Self::new(
            &self.numerator_over(k) + &other.numerator_over(k),
            k,
        ))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let k = self.denominator_power.max(other.denominator_power);
        Ok(Self::new(
            &self.numerator_over(k) - &other.numerator_over(k),
            k,
        ))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self::new(
            &self.numerator * &other.numerator,
            self.denominator_power + other.denominator_power,
        ))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.numerator.scale(c), self.denominator_power)
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.numerator, self.denominator_power)
    }

    pub fn pow(&self, exp: u32) -> Self {
        Self::new(self.numerator.pow(exp), self.denominator_power * exp)
    }

    /// Shift of the formula's argument by a vector summing to zero. The
    /// denominator is untouched because such shifts preserve the total.
    pub fn shift(&self, offsets: &[i64]) -> Result<Self> {
        if self.denominator_power > 0 && offsets.iter().sum::<i64>() != 0 {
            return Err(Error::Domain(
                "shifting a formula with a denominator requires offsets that preserve the total",
            ));
        }
        Ok(Self::new(
            self.numerator.shift(offsets)?,
            self.denominator_power,
        ))
    }

    pub fn permute(&self, perm: &[usize]) -> Self {
        Self::new(self.numerator.permute(perm), self.denominator_power)
    }

    /// Exact value `numerator(point) / sum(point)^k`.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        let num = self.numerator.evaluate(point)?;
        if self.denominator_power == 0 {
            return Ok(num);
        }
        let total: Rational = point.iter().sum();
        if total.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(num / num_traits::pow(total, self.denominator_power as usize))
    }

    /// Degree and leading coefficient in `a` after setting every variable
    /// to `a` and cancelling the denominator `(n a)^k`.
    pub fn leading_univariate(&self) -> Result<(i64, Rational)> {
        let uni = self.numerator.collapse_to_univariate();
        let (deg, coeff) = uni
            .iter()
            .enumerate()
            .rev()
            .find(|(_, c)| !c.is_zero())
            .ok_or(Error::ZeroFormula)?;
        let n = Rational::from_integer(BigInt::from(self.vars()));
        let den = num_traits::pow(n, self.denominator_power as usize);
        Ok((deg as i64 - i64::from(self.denominator_power), coeff / den))
    }
}

/// Free-function form of [`RationalFormula::evaluate`].
pub fn evaluate_formula(f: &RationalFormula, point: &[Rational]) -> Result<Rational> {
    f.evaluate(point)
}

/// Free-function form of [`RationalFormula::leading_univariate`].
pub fn leading_univariate(f: &RationalFormula) -> Result<(i64, Rational)> {
    f.leading_univariate()
}

impl From<MultiPoly> for RationalFormula {
    fn from(p: MultiPoly) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Debug for RationalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / S^{}", self.numerator, self.denominator_power)
    }
}

impl Default for RationalFormula {
    fn default() -> Self {
        Self::zero(2)
    }
}
