use core::cmp::Ordering;
use core::fmt;

use super::VAR_NAMES;

/// Largest supported number of variables.
pub const MAX_VARS: usize = 3;

/// A power product `A^i B^j C^l`.
///
/// Exponents beyond the owning polynomial's variable count are always zero, so
/// a two-variable monomial is stored as `[i, j, 0]`.
///
/// `Ord` is the canonical display order: graded lexicographic with higher
/// total degree first and `A > B > C` within a degree. The *first* monomial in
/// canonical order compares as the *smallest*, so iterating a `BTreeMap` keyed
/// by `Monomial` walks terms in display order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        exps: [0; MAX_VARS],
    };

    /// Panics if more than [`MAX_VARS`] exponents are given.
    pub fn new(exps: &[u16]) -> Self {
        assert!(exps.len() <= MAX_VARS, "at most {MAX_VARS} variables");
        let mut m = Self::ONE;
        m.exps[..exps.len()].copy_from_slice(exps);
        m
    }

    pub fn var(index: usize) -> Self {
        let mut m = Self::ONE;
        m.exps[index] = 1;
        m
    }

    pub fn exponent(&self, var: usize) -> u16 {
        self.exps[var]
    }

    pub fn exponents(&self) -> &[u16; MAX_VARS] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps == [0; MAX_VARS]
    }

    /// Number of trailing variables with nonzero exponent, i.e. the smallest
    /// variable count this monomial fits in.
    pub fn arity(&self) -> usize {
        self.exps.iter().rposition(|&e| e != 0).map_or(0, |i| i + 1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for (e, o) in m.exps.iter_mut().zip(other.exps) {
            *e += o;
        }
        m
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps).all(|(&a, b)| a <= b)
    }

    /// `self / divisor`, if exact.
    pub fn checked_div(&self, divisor: &Monomial) -> Option<Monomial> {
        if !divisor.divides(self) {
            return None;
        }
        let mut m = *self;
        for (e, d) in m.exps.iter_mut().zip(divisor.exps) {
            *e -= d;
        }
        Some(m)
    }

    /// Moves the exponent of variable `v` to position `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Monomial {
        let mut m = Self::ONE;
        for (v, &target) in perm.iter().enumerate() {
            m.exps[target] = self.exps[v];
        }
        m
    }

    fn key(&self) -> (u32, [u16; MAX_VARS]) {
        (self.degree(), self.exps)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.key().cmp(&self.key())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `A^2*B`, or `1` for the unit monomial.
impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (name, &e) in VAR_NAMES.iter().zip(&self.exps) {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}
