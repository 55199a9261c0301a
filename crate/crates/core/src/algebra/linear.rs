//! Exact Gaussian elimination over the rationals.
//!
//! Pivoting takes the first nonzero entry in column order, which keeps runs
//! reproducible; there is no numerical stability to worry about.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use super::Rational;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Unique,
    Underdetermined,
    Inconsistent,
}

/// Outcome of an exact solve. `solution` is present iff the system is
/// consistent; for an underdetermined system it is the particular solution
/// with every free unknown set to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionReport {
    pub solution: Option<Vec<Rational>>,
    pub rank: usize,
    pub unknowns: usize,
    pub status: SolveStatus,
}

impl SolutionReport {
    pub fn is_unique(&self) -> bool {
        self.status == SolveStatus::Unique
    }
}

impl fmt::Display for SolutionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?}, rank {} of {} unknowns",
            self.status, self.rank, self.unknowns
        )
    }
}

/// Solves `matrix * x = rhs` exactly. Inconsistency is reported through the
/// status, not as an error; only a ragged matrix or a wrong-length `rhs` is
/// an error.
pub fn solve_exact_linear(matrix: &[Vec<Rational>], rhs: &[Rational]) -> Result<SolutionReport> {
    let cols = matrix.first().map_or(0, Vec::len);
    if rhs.len() != matrix.len() {
        return Err(Error::Shape {
            expected: matrix.len(),
            found: rhs.len(),
        });
    }
    if let Some(row) = matrix.iter().find(|r| r.len() != cols) {
        return Err(Error::Shape {
            expected: cols,
            found: row.len(),
        });
    }
    let mut a: Vec<Vec<Rational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = Vec::with_capacity(cols + 1);
            r.extend(row.iter().cloned());
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = forward_eliminate(&mut a, cols);
    let rank = pivots.len();

    if a[rank..].iter().any(|row| !row[cols].is_zero()) {
        return Ok(SolutionReport {
            solution: None,
            rank,
            unknowns: cols,
            status: SolveStatus::Inconsistent,
        });
    }

    let mut x = vec![Rational::zero(); cols];
    for (k, &c) in pivots.iter().enumerate().rev() {
        let row = &a[k];
        let mut val = row[cols].clone();
        for j in c + 1..cols {
            if !row[j].is_zero() && !x[j].is_zero() {
                val -= &row[j] * &x[j];
            }
        }
        x[c] = val;
    }
    let status = if rank == cols {
        SolveStatus::Unique
    } else {
        SolveStatus::Underdetermined
    };
    Ok(SolutionReport {
        solution: Some(x),
        rank,
        unknowns: cols,
        status,
    })
}

/// Reduces the augmented matrix `a` (with `cols` coefficient columns) to
/// row echelon form with unit pivots. Returns the pivot columns; rows past
/// the rank are zero in every coefficient column.
fn forward_eliminate(a: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let width = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &mut top[r];
        let inv = Rational::one() / &pivot_row[c];
        let mut support = Vec::new();
        for j in c..width {
            if !pivot_row[j].is_zero() {
                pivot_row[j] *= &inv;
                if j > c {
                    support.push(j);
                }
            }
        }
        for row in rest.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let factor = core::mem::take(&mut row[c]);
            for &j in &support {
                row[j] -= &factor * &pivot_row[j];
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// `PA = LU` factorization of a nonsingular square matrix, reusable across
/// right-hand sides.
#[derive(Clone, Debug)]
pub struct ExactLu {
    lu: Vec<Vec<Rational>>,
    perm: Vec<usize>,
}

impl ExactLu {
    pub fn factor(matrix: &[Vec<Rational>]) -> Result<Self> {
        let n = matrix.len();
        if let Some(row) = matrix.iter().find(|r| r.len() != n) {
            return Err(Error::Shape {
                expected: n,
                found: row.len(),
            });
        }
        let mut lu = matrix.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for c in 0..n {
            let p = (c..n)
                .find(|&i| !lu[i][c].is_zero())
                .ok_or(Error::Domain("singular matrix"))?;
            lu.swap(c, p);
            perm.swap(c, p);
            let (top, rest) = lu.split_at_mut(c + 1);
            let pivot_row = &top[c];
            let support: Vec<usize> = (c + 1..n).filter(|&j| !pivot_row[j].is_zero()).collect();
            for row in rest.iter_mut() {
                if row[c].is_zero() {
                    continue;
                }
                let factor = &row[c] / &pivot_row[c];
                for &j in &support {
                    row[j] -= &factor * &pivot_row[j];
                }
                row[c] = factor;
            }
        }
        Ok(ExactLu { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.lu.len()
    }

    pub fn solve(&self, rhs: &[Rational]) -> Result<Vec<Rational>> {
        let n = self.dim();
        if rhs.len() != n {
            return Err(Error::Shape {
                expected: n,
                found: rhs.len(),
            });
        }
        let mut y: Vec<Rational> = self.perm.iter().map(|&i| rhs[i].clone()).collect();
        for i in 0..n {
            let (done, cur) = y.split_at_mut(i);
            for (j, yj) in done.iter().enumerate() {
                let l = &self.lu[i][j];
                if !l.is_zero() && !yj.is_zero() {
                    cur[0] -= l * yj;
                }
            }
        }
        for i in (0..n).rev() {
            let (head, tail) = y.split_at_mut(i + 1);
            let yi = &mut head[i];
            for (k, xj) in tail.iter().enumerate() {
                let u = &self.lu[i][i + 1 + k];
                if !u.is_zero() && !xj.is_zero() {
                    *yi -= u * xj;
                }
            }
            *yi /= &self.lu[i][i];
        }
        Ok(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{frac, int};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    #[test]
    fn identity() {
        let r = solve_exact_linear(&m(&[&[1, 0], &[0, 1]]), &[int(3), frac(1, 2)]).unwrap();
        assert_eq!(r.status, SolveStatus::Unique);
        assert_eq!(r.rank, 2);
        assert_eq!(r.solution, Some(vec![int(3), frac(1, 2)]));
    }

    #[test]
    fn sum_and_difference() {
        let r = solve_exact_linear(&m(&[&[1, 1], &[1, -1]]), &[int(2), int(0)]).unwrap();
        assert!(r.is_unique());
        assert_eq!(r.solution, Some(vec![int(1), int(1)]));
    }

    #[test]
    fn proportional_rows_mismatched_rhs() {
        let r = solve_exact_linear(&m(&[&[1, 1], &[2, 2]]), &[int(1), int(3)]).unwrap();
        assert_eq!(r.status, SolveStatus::Inconsistent);
        assert_eq!(r.rank, 1);
        assert_eq!(r.solution, None);
    }

    #[test]
    fn underdetermined_and_overdetermined() {
        let r = solve_exact_linear(&m(&[&[1, 1], &[2, 2]]), &[int(1), int(2)]).unwrap();
        assert_eq!(r.status, SolveStatus::Underdetermined);
        assert_eq!(r.solution, Some(vec![int(1), int(0)]));

        let r = solve_exact_linear(&m(&[&[1, 0], &[0, 1], &[1, 1]]), &[int(1), int(2), int(3)])
            .unwrap();
        assert_eq!(r.status, SolveStatus::Unique);
        assert_eq!(r.solution, Some(vec![int(1), int(2)]));
    }

    #[test]
    fn shape_errors() {
        assert!(solve_exact_linear(&m(&[&[1, 0], &[0]]), &[int(1), int(1)]).is_err());
        assert!(solve_exact_linear(&m(&[&[1, 0]]), &[int(1), int(1)]).is_err());
        assert!(ExactLu::factor(&m(&[&[1, 0]])).is_err());
    }

    #[test]
    fn lu_needs_pivoting_and_reuses_factors() {
        let a = m(&[&[0, 2, 1], &[1, 1, 0], &[3, 0, 1]]);
        let lu = ExactLu::factor(&a).unwrap();
        for x in [[int(1), int(2), int(3)], [frac(1, 3), int(-1), int(0)]] {
            let b: Vec<Rational> = a
                .iter()
                .map(|row| row.iter().zip(&x).map(|(p, q)| p * q).sum())
                .collect();
            assert_eq!(lu.solve(&b).unwrap(), x.to_vec());
        }
        assert_eq!(
            ExactLu::factor(&m(&[&[1, 2], &[2, 4]])).unwrap_err(),
            Error::Domain("singular matrix")
        );
    }
}
