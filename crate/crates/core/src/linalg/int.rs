//! Integer matrices generic over the ring of integers in use.
//!
//! [`IntScalar`] is implemented for every signed machine integer and for
//! [`num_bigint::BigInt`]. Invariant factors are normally computed over
//! `BigInt` (see [`crate::BigIntMatrix`]); fixed-width instantiations are
//! fine when entries are known to stay small, as for fan ray matrices.

use std::fmt::Debug;

use num_integer::Integer;
use num_traits::Signed;

use crate::error::{Error, Result};

/// An exact integer type usable as a matrix entry.
pub trait IntScalar: Integer + Signed + Clone + Debug {}

impl<T> IntScalar for T where T: Integer + Signed + Clone + Debug {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: IntScalar> IntMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some((r, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::Shape(format!(
                "row {r} has length {}, expected {cols}",
                row.len()
            )));
        }
        let n = rows.len();
        Ok(Self {
            rows: n,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Converts from any integer type that `T` can be built from.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self>
    where
        T: From<i64>,
    {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| T::from(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.entries[r * self.cols + c] = v;
    }

    fn to_rows(&self) -> Vec<Vec<T>> {
        self.entries
            .chunks(self.cols.max(1))
            .take(self.rows)
            .map(<[T]>::to_vec)
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<T> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut m = self.to_rows();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                    return Ok(T::zero());
                };
                m.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                    m[i][j] = num / prev.clone();
                }
                m[i][k] = T::zero();
            }
            prev = m[k][k].clone();
        }
        Ok(sign * m[n - 1][n - 1].clone())
    }

    /// Invariant factors d1 | d2 | ... of the Smith normal form, all positive.
    /// Zero diagonal entries are dropped, so the length is the rank.
    pub fn smith_normal_form(&self) -> Vec<T> {
        let mut m = self.to_rows();
        let (rows, cols) = (self.rows, self.cols);
        let mut diag = Vec::new();
        let mut t = 0;
        while t < rows.min(cols) {
            // smallest nonzero entry in the trailing block becomes the pivot
            let pivot = (t..rows)
                .flat_map(|r| (t..cols).map(move |c| (r, c)))
                .filter(|&(r, c)| !m[r][c].is_zero())
                .min_by(|&(r1, c1), &(r2, c2)| m[r1][c1].abs().cmp(&m[r2][c2].abs()));
            let Some((pr, pc)) = pivot else { break };
            m.swap(t, pr);
            for row in m.iter_mut() {
                row.swap(t, pc);
            }

            loop {
                let mut dirty = false;
                for r in t + 1..rows {
                    if m[r][t].is_zero() {
                        continue;
                    }
                    let q = m[r][t].div_floor(&m[t][t]);
                    for c in t..cols {
                        let v = m[t][c].clone() * q.clone();
                        m[r][c] = m[r][c].clone() - v;
                    }
                    if !m[r][t].is_zero() {
                        dirty = true;
                    }
                }
                for c in t + 1..cols {
                    if m[t][c].is_zero() {
                        continue;
                    }
                    let q = m[t][c].div_floor(&m[t][t]);
                    for row in m.iter_mut().skip(t) {
                        let v = row[t].clone() * q.clone();
                        row[c] = row[c].clone() - v;
                    }
                    if !m[t][c].is_zero() {
                        dirty = true;
                    }
                }
                if !dirty {
                    // pivot must divide the whole trailing block
                    let bad = (t + 1..rows)
                        .flat_map(|r| (t + 1..cols).map(move |c| (r, c)))
                        .find(|&(r, c)| !m[r][c].is_multiple_of(&m[t][t]));
                    match bad {
                        None => break,
                        Some((r, _)) => {
                            for c in t..cols {
                                let v = m[r][c].clone();
                                m[t][c] = m[t][c].clone() + v;
                            }
                            continue;
                        }
                    }
                }
                // move the smallest remaining entry of row/column t into the pivot
                let (mut br, mut bc) = (t, t);
                for r in t..rows {
                    if !m[r][t].is_zero() && m[r][t].abs() < m[br][bc].abs() {
                        (br, bc) = (r, t);
                    }
                }
                for c in t..cols {
                    if !m[t][c].is_zero() && m[t][c].abs() < m[br][bc].abs() {
                        (br, bc) = (t, c);
                    }
                }
                m.swap(t, br);
                for row in m.iter_mut() {
                    row.swap(t, bc);
                }
            }
            diag.push(m[t][t].abs());
            t += 1;
        }
        diag
    }
}
