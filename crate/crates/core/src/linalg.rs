//! Small dense integer matrices with exact algorithms: fraction-free rank,
//! unimodular inverse, left kernels, and a row Hermite normal form used to
//! reduce lattice points to canonical coset representatives.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds from row vectors; all rows must share a length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Dimension {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn checked_mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: i128 = 0;
                for l in 0..self.cols {
                    acc += self.get(i, l) as i128 * other.get(l, j) as i128;
                }
                out.set(i, j, arith::narrow(acc)?);
            }
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| arith::sub(*a, *b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn checked_neg(&self) -> Result<IntMatrix> {
        let data = self.data.iter().map(|&a| arith::neg(a)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Row vector times matrix, `v M`.
    pub fn left_apply(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.rows {
            return Err(Error::Dimension {
                expected: self.rows,
                found: v.len(),
            });
        }
        (0..self.cols)
            .map(|j| {
                let acc: i128 = (0..self.rows).map(|i| v[i] as i128 * self.get(i, j) as i128).sum();
                arith::narrow(acc)
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == (i == j) as i64))
    }

    /// Rank over the rationals by Bareiss fraction-free elimination.
    pub fn rank(&self) -> Result<usize> {
        let mut a: Vec<Vec<i128>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|&x| x as i128).collect())
            .collect();
        let mut rank = 0;
        let mut prev: i128 = 1;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&r| a[r][col] != 0) else {
                continue;
            };
            a.swap(rank, pivot);
            for r in rank + 1..self.rows {
                for c in col + 1..self.cols {
                    let lhs = a[rank][col].checked_mul(a[r][c]).ok_or(Error::Overflow)?;
                    let rhs = a[r][col].checked_mul(a[rank][c]).ok_or(Error::Overflow)?;
                    a[r][c] = lhs.checked_sub(rhs).ok_or(Error::Overflow)? / prev;
                }
                a[r][col] = 0;
            }
            prev = a[rank][col];
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        Ok(rank)
    }

    fn to_rational(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|&x| BigRational::from_integer(BigInt::from(x)))
                    .collect()
            })
            .collect()
    }

    /// Inverse of a matrix in `GL_n(Z)`.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::NotUnimodular);
        }
        let n = self.rows;
        let mut a = self.to_rational();
        for (i, row) in a.iter_mut().enumerate() {
            for j in 0..n {
                row.push(if i == j { BigRational::one() } else { BigRational::zero() });
            }
        }
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::NotUnimodular)?;
            a.swap(col, pivot);
            let inv = a[col][col].recip();
            for x in a[col].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    for c in 0..2 * n {
                        let delta = &factor * &a[col][c];
                        a[r][c] -= delta;
                    }
                }
            }
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let x = &a[i][n + j];
                if !x.is_integer() {
                    return Err(Error::NotUnimodular);
                }
                out.set(i, j, x.to_integer().to_i64().ok_or(Error::Overflow)?);
            }
        }
        Ok(out)
    }

    /// A primitive integer vector `b != 0` with `b M = 0`, if one exists.
    pub fn left_kernel_vector(&self) -> Result<Option<Vec<i64>>> {
        // b M = 0  <=>  M^T b^T = 0: reduce M^T to RREF.
        let t = self.transpose();
        let mut a = t.to_rational();
        let (nrows, ncols) = (t.rows, t.cols);
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..ncols {
            let Some(p) = (row..nrows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(row, p);
            let inv = a[row][col].recip();
            for x in a[row].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..nrows {
                if r != row && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    for c in 0..ncols {
                        let delta = &factor * &a[row][c];
                        a[r][c] -= delta;
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == nrows {
                break;
            }
        }
        let Some(free) = (0..ncols).find(|c| !pivots.contains(c)) else {
            return Ok(None);
        };
        let mut x = vec![BigRational::zero(); ncols];
        x[free] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = -a[r][free].clone();
        }
        let lcm = x.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let ints: Vec<BigInt> = x.iter().map(|q| (q * &lcm).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        ints.iter()
            .map(|v| (v / &g).to_i64().ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    /// Row-style Hermite normal form of the row lattice: echelon rows with
    /// positive pivots and entries above each pivot reduced into
    /// `[0, pivot)`. Zero rows are dropped.
    pub fn hermite_normal_form(&self) -> Result<IntMatrix> {
        let mut a: Vec<Vec<i128>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|&x| x as i128).collect())
            .collect();
        let ncols = self.cols;
        let mut row = 0;
        for col in 0..ncols {
            if row == a.len() {
                break;
            }
            // Euclid on the column below `row` until one nonzero remains.
            loop {
                let nonzero: Vec<usize> = (row..a.len()).filter(|&r| a[r][col] != 0).collect();
                if nonzero.is_empty() {
                    break;
                }
                let &min_r = nonzero.iter().min_by_key(|&&r| a[r][col].abs()).expect("nonempty");
                a.swap(row, min_r);
                if nonzero.len() == 1 {
                    break;
                }
                for r in row + 1..a.len() {
                    if a[r][col] != 0 {
                        let q = a[r][col].div_euclid(a[row][col]);
                        for c in col..ncols {
                            let delta = q.checked_mul(a[row][c]).ok_or(Error::Overflow)?;
                            a[r][c] = a[r][c].checked_sub(delta).ok_or(Error::Overflow)?;
                        }
                    }
                }
            }
            if a[row][col] == 0 {
                continue;
            }
            if a[row][col] < 0 {
                for c in col..ncols {
                    a[row][c] = -a[row][c];
                }
            }
            for r in 0..row {
                let q = a[r][col].div_euclid(a[row][col]);
                if q != 0 {
                    for c in col..ncols {
                        let delta = q.checked_mul(a[row][c]).ok_or(Error::Overflow)?;
                        a[r][c] = a[r][c].checked_sub(delta).ok_or(Error::Overflow)?;
                    }
                }
            }
            row += 1;
        }
        a.truncate(row);
        let rows = a
            .into_iter()
            .map(|r| r.into_iter().map(arith::narrow).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if rows.is_empty() {
            return Ok(Self::zeros(0, ncols));
        }
        Self::from_rows(&rows)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

/// Canonical representatives of `Z^d / U` for a lattice `U` given by a
/// basis.
#[derive(Clone, Debug)]
pub struct CosetReducer {
    hnf: IntMatrix,
    pivots: Vec<usize>,
}

impl CosetReducer {
    /// Rejects bases whose rows are linearly dependent.
    pub fn new(basis: &IntMatrix) -> Result<Self> {
        if basis.rank()? != basis.rows() {
            return Err(Error::DependentBasis);
        }
        let hnf = basis.hermite_normal_form()?;
        let pivots = (0..hnf.rows())
            .map(|r| (0..hnf.cols()).find(|&c| hnf.get(r, c) != 0).expect("HNF rows are nonzero"))
            .collect();
        Ok(Self { hnf, pivots })
    }

    pub fn lattice_rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `x` so that every pivot coordinate lies in `[0, pivot)`.
    pub fn reduce(&self, x: &mut [i64]) -> Result<()> {
        for (r, &pc) in self.pivots.iter().enumerate() {
            let q = x[pc].div_euclid(self.hnf.get(r, pc));
            if q != 0 {
                for (c, xc) in x.iter_mut().enumerate().skip(pc) {
                    *xc = arith::sub(*xc, arith::mul(q, self.hnf.get(r, c))?)?;
                }
            }
        }
        Ok(())
    }
}

/// Number of distinct cosets of the lattice spanned by `basis` (rows) that
/// meet the cubical ball `[-n, n]^dim`.
pub fn coset_count(basis: &IntMatrix, dim: usize, n: u64, budget: u128) -> Result<u64> {
    if basis.cols() != dim {
        return Err(Error::Dimension {
            expected: dim,
            found: basis.cols(),
        });
    }
    let side = 2 * n as u128 + 1;
    let points = side.checked_pow(dim as u32).unwrap_or(u128::MAX);
    if points > budget {
        return Err(Error::Budget {
            needed: points,
            budget,
        });
    }
    let reducer = if basis.rows() == 0 {
        None
    } else {
        Some(CosetReducer::new(basis)?)
    };
    let n = i64::try_from(n).map_err(|_| Error::Overflow)?;
    let mut seen = BTreeSet::new();
    let mut x = vec![-n; dim];
    loop {
        let mut y = x.clone();
        if let Some(red) = &reducer {
            red.reduce(&mut y)?;
        }
        seen.insert(y);
        // odometer over [-n, n]^dim
        let mut idx = 0;
        loop {
            if idx == dim {
                return Ok(seen.len() as u64);
            }
            if x[idx] < n {
                x[idx] += 1;
                break;
            }
            x[idx] = -n;
            idx += 1;
        }
    }
}
