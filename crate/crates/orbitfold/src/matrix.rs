//! Matrices over rational functions and exact linear solving.
//!
//! Three solvers are provided:
//! * `solve_linear` — fraction-free (Bareiss) elimination over scalars with
//!   full unique/parametric/inconsistent classification;
//! * `solve_linear_ratfun` — Gaussian elimination over the rational-function
//!   field, for systems whose coefficients carry symbolic parameters;
//! * `solve_poly_system` — Bareiss elimination over polynomials for square
//!   systems whose solutions are known to be polynomial (Jacobian systems);
//!   non-polynomial solutions are reported as errors.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::ratfun::RatFun;
use crate::scalar::ExactScalar;

/// Rectangular matrix of rational functions over one chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMatrix {
    /// Row count.
    pub rows: usize,
    /// Column count.
    pub cols: usize,
    /// Row-major entries.
    pub entries: Vec<RatFun>,
}

impl ExactMatrix {
    /// Build from a function of (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RatFun) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, entries }
    }

    /// Identity matrix in a chart.
    pub fn identity(chart: &Arc<Chart>, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                RatFun::one(chart)
            } else {
                RatFun::zero(chart)
            }
        })
    }

    /// Entry accessor.
    pub fn get(&self, i: usize, j: usize) -> &RatFun {
        &self.entries[i * self.cols + j]
    }

    /// Entry mutator.
    pub fn set(&mut self, i: usize, j: usize, v: RatFun) {
        self.entries[i * self.cols + j] = v;
    }

    /// Matrix product.
    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows);
        let chart = self.entries[0].chart().clone();
        ExactMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = RatFun::zero(&chart);
            for k in 0..self.cols {
                acc = &acc + &(self.get(i, k) * other.get(k, j));
            }
            acc
        })
    }

    /// Transpose.
    pub fn transpose(&self) -> ExactMatrix {
        ExactMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Determinant by field elimination.
    pub fn det(&self) -> RatFun {
        assert_eq!(self.rows, self.cols);
        let chart = self.entries[0].chart().clone();
        let n = self.rows;
        let mut m: Vec<Vec<RatFun>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut det = RatFun::one(&chart);
        for k in 0..n {
            let pivot_row = match (k..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => r,
                None => return RatFun::zero(&chart),
            };
            if pivot_row != k {
                m.swap(k, pivot_row);
                det = -&det;
            }
            let pivot = m[k][k].clone();
            det = &det * &pivot;
            for r in k + 1..n {
                if m[r][k].is_zero() {
                    continue;
                }
                let factor = (&m[r][k] / &pivot).expect("pivot nonzero");
                for c in k..n {
                    let delta = &factor * &m[k][c];
                    m[r][c] = &m[r][c] - &delta;
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination over the function field.
    pub fn inverse(&self) -> Result<ExactMatrix> {
        assert_eq!(self.rows, self.cols);
        let chart = self.entries[0].chart().clone();
        let n = self.rows;
        let mut m: Vec<Vec<RatFun>> = (0..n)
            .map(|i| {
                let mut row: Vec<RatFun> = (0..n).map(|j| self.get(i, j).clone()).collect();
                row.extend((0..n).map(|j| {
                    if i == j {
                        RatFun::one(&chart)
                    } else {
                        RatFun::zero(&chart)
                    }
                }));
                row
            })
            .collect();
        for k in 0..n {
            let pivot_row = (k..n)
                .find(|&r| !m[r][k].is_zero())
                .ok_or(Error::SingularMatrix)?;
            m.swap(k, pivot_row);
            let pivot = m[k][k].clone();
            let inv = pivot.inverse()?;
            for c in 0..2 * n {
                m[k][c] = &m[k][c] * &inv;
            }
            for r in 0..n {
                if r == k || m[r][k].is_zero() {
                    continue;
                }
                let factor = m[r][k].clone();
                for c in k..2 * n {
                    let delta = &factor * &m[k][c];
                    m[r][c] = &m[r][c] - &delta;
                }
            }
        }
        Ok(ExactMatrix::from_fn(n, n, |i, j| m[i][n + j].clone()))
    }
}

/// Outcome of exact linear solving.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearSolution {
    /// Exactly one solution.
    Unique(Vec<ExactScalar>),
    /// Affine solution set: particular point plus nullspace basis.
    Parametric {
        /// One solution (free variables set to zero).
        particular: Vec<ExactScalar>,
        /// Basis of the homogeneous solution space.
        basis: Vec<Vec<ExactScalar>>,
    },
    /// No solution.
    Inconsistent,
}

/// Solve `A x = b` over exact scalars by fraction-free (Bareiss) elimination.
pub fn solve_linear(a: &[Vec<ExactScalar>], b: &[ExactScalar]) -> LinearSolution {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = a.first().map(|r| r.len()).unwrap_or(0);

    // Clear denominators row by row; solutions are unchanged.
    let width = cols + 1;
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(rows);
    for (row, rhs) in a.iter().zip(b) {
        assert_eq!(row.len(), cols);
        let mut lcm = BigInt::one();
        for x in row.iter().chain(std::iter::once(rhs)) {
            lcm = lcm.lcm(x.denom());
        }
        let mut int_row: Vec<BigInt> = row
            .iter()
            .map(|x| x.numer() * (&lcm / x.denom()))
            .collect();
        int_row.push(rhs.numer() * (&lcm / rhs.denom()));
        m.push(int_row);
    }

    // Fraction-free forward elimination; divisions below are exact.
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut prev = BigInt::one();
    let mut rank = 0usize;
    for col in 0..cols {
        let pivot_row = match (rank..rows).find(|&r| !m[r][col].is_zero()) {
            Some(r) => r,
            None => continue,
        };
        m.swap(rank, pivot_row);
        let pivot = m[rank][col].clone();
        // Every row below is updated (zero multipliers included) so the
        // exact-division invariant of the Bareiss scheme is preserved.
        for r in rank + 1..rows {
            let factor = m[r][col].clone();
            for c in 0..width {
                let v = &m[r][c] * &pivot - &m[rank][c] * &factor;
                m[r][c] = v.div_floor(&prev);
            }
        }
        prev = pivot;
        pivots.push((rank, col));
        rank += 1;
        if rank == rows {
            break;
        }
    }

    // Inconsistency: a zero coefficient row with nonzero rhs.
    for r in rank..rows {
        if m[r][..cols].iter().all(|x| x.is_zero()) && !m[r][cols].is_zero() {
            return LinearSolution::Inconsistent;
        }
    }

    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();

    let solve_with = |free_values: &dyn Fn(usize) -> ExactScalar,
                      rhs_on: bool|
     -> Vec<ExactScalar> {
        let mut x = vec![ExactScalar::zero(); cols];
        for &fc in &free_cols {
            x[fc] = free_values(fc);
        }
        for &(r, c) in pivots.iter().rev() {
            let mut acc = if rhs_on {
                ExactScalar::from_integer(m[r][cols].clone())
            } else {
                ExactScalar::zero()
            };
            for j in c + 1..cols {
                if !m[r][j].is_zero() {
                    acc -= ExactScalar::from_integer(m[r][j].clone()) * &x[j];
                }
            }
            x[c] = acc / ExactScalar::from_integer(m[r][c].clone());
        }
        x
    };

    let particular = solve_with(&|_| ExactScalar::zero(), true);
    if free_cols.is_empty() {
        return LinearSolution::Unique(particular);
    }
    let basis = free_cols
        .iter()
        .map(|&fc| {
            solve_with(
                &|c| {
                    if c == fc {
                        ExactScalar::one()
                    } else {
                        ExactScalar::zero()
                    }
                },
                false,
            )
        })
        .collect();
    LinearSolution::Parametric { particular, basis }
}

/// Outcome of solving over the rational-function field.
#[derive(Debug, Clone)]
pub enum RatSolution {
    /// Exactly one solution.
    Unique(Vec<RatFun>),
    /// Affine solution set.
    Parametric {
        /// One solution (free variables set to zero).
        particular: Vec<RatFun>,
        /// Basis of the homogeneous solution space.
        basis: Vec<Vec<RatFun>>,
    },
    /// No solution.
    Inconsistent,
}

/// Solve `A x = b` where entries are rational functions (e.g. in symbolic
/// parameters) by ordinary Gaussian elimination over the field.
pub fn solve_linear_ratfun(a: &[Vec<RatFun>], b: &[RatFun]) -> RatSolution {
    let rows = a.len();
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    assert_eq!(rows, b.len());
    let chart = if rows > 0 {
        a[0][0].chart().clone()
    } else {
        b[0].chart().clone()
    };
    let width = cols + 1;
    let mut m: Vec<Vec<RatFun>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0usize;
    for col in 0..cols {
        let pivot_row = match (rank..rows).find(|&r| !m[r][col].is_zero()) {
            Some(r) => r,
            None => continue,
        };
        m.swap(rank, pivot_row);
        let inv = m[rank][col].inverse().expect("pivot nonzero");
        for c in col..width {
            m[rank][c] = &m[rank][c] * &inv;
        }
        for r in 0..rows {
            if r == rank || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..width {
                let delta = &factor * &m[rank][c];
                m[r][c] = &m[r][c] - &delta;
            }
        }
        pivots.push((rank, col));
        rank += 1;
        if rank == rows {
            break;
        }
    }

    for r in rank..rows {
        if m[r][..cols].iter().all(|x| x.is_zero()) && !m[r][cols].is_zero() {
            return RatSolution::Inconsistent;
        }
    }

    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut particular = vec![RatFun::zero(&chart); cols];
    for &(r, c) in &pivots {
        particular[c] = m[r][cols].clone();
    }
    if free_cols.is_empty() {
        return RatSolution::Unique(particular);
    }
    let basis = free_cols
        .iter()
        .map(|&fc| {
            let mut v = vec![RatFun::zero(&chart); cols];
            v[fc] = RatFun::one(&chart);
            for &(r, c) in &pivots {
                v[c] = -&m[r][fc];
            }
            v
        })
        .collect();
    RatSolution::Parametric { particular, basis }
}

/// Solve the square polynomial system `A x = rhs_k` for several right-hand
/// sides at once by fraction-free elimination. Every solution component must
/// be a polynomial; a non-polynomial component is an error.
pub fn solve_poly_system(
    a: &[Vec<MultiPoly>],
    rhs: &[Vec<MultiPoly>],
) -> Result<Vec<Vec<MultiPoly>>> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n));
    assert!(rhs.iter().all(|r| r.len() == n));
    let chart = a[0][0].chart.clone();
    let m_rhs = rhs.len();
    let width = n + m_rhs;
    let mut m: Vec<Vec<MultiPoly>> = (0..n)
        .map(|i| {
            let mut row: Vec<MultiPoly> = a[i].clone();
            row.extend(rhs.iter().map(|col| col[i].clone()));
            row
        })
        .collect();

    // Bareiss forward elimination: intermediate divisions are exact.
    let mut prev = MultiPoly::one(&chart);
    for k in 0..n {
        let pivot_row = (k..n)
            .min_by_key(|&r| {
                if m[r][k].is_zero() {
                    usize::MAX
                } else {
                    m[r][k].num_terms()
                }
            })
            .filter(|&r| !m[r][k].is_zero())
            .ok_or(Error::SingularMatrix)?;
        m.swap(k, pivot_row);
        let pivot = m[k][k].clone();
        for r in k + 1..n {
            let factor = m[r][k].clone();
            for c in k..width {
                let v = &(&m[r][c] * &pivot) - &(&m[k][c] * &factor);
                m[r][c] = v
                    .div_exact(&prev)
                    .ok_or_else(|| Error::Internal("Bareiss division not exact".into()))?;
            }
        }
        prev = pivot;
    }

    // Back-substitution with exact divisions; failure means the true solution
    // is not polynomial.
    let mut solutions = Vec::with_capacity(m_rhs);
    for col in 0..m_rhs {
        let mut x = vec![MultiPoly::zero(&chart); n];
        for k in (0..n).rev() {
            let mut acc = m[k][n + col].clone();
            for j in k + 1..n {
                acc = &acc - &(&m[k][j] * &x[j]);
            }
            x[k] = acc.div_exact(&m[k][k]).ok_or_else(|| {
                Error::NotPolynomial(format!("solution component {k} of rhs {col}"))
            })?;
        }
        solutions.push(x);
    }
    Ok(solutions)
}
