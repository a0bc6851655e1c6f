//! Exact dense linear algebra over `Q(ζ_N)`.
//!
//! Gaussian elimination picks, in each column, the nonzero candidate of
//! smallest coefficient height as pivot; this keeps rational growth in check
//! for the moderately sized systems produced by the monodromy and Fox routes.

use std::fmt;

use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::par::{self, Strategy};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    order: u32,
    cols: usize,
    rows: Vec<Vec<CycloNum>>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix[{}x{} over Q(z_{})]", self.nrows(), self.cols, self.order)?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(nrows: usize, ncols: usize, order: u32) -> Self {
        Matrix {
            order,
            cols: ncols,
            rows: vec![vec![CycloNum::zero(order); ncols]; nrows],
        }
    }

    pub fn identity(n: usize, order: u32) -> Self {
        let mut m = Self::zeros(n, n, order);
        for i in 0..n {
            m.rows[i][i] = CycloNum::one(order);
        }
        m
    }

    pub fn from_rows(order: u32, ncols: usize, rows: Vec<Vec<CycloNum>>) -> Result<Self> {
        for row in &rows {
            if row.len() != ncols {
                return Err(Error::invalid("ragged matrix rows"));
            }
            if let Some(c) = row.iter().find(|c| c.order() != order) {
                return Err(Error::OrderMismatch(order, c.order()));
            }
        }
        Ok(Matrix {
            order,
            cols: ncols,
            rows,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloNum {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycloNum) {
        self.rows[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[CycloNum] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<CycloNum>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<CycloNum>> {
        self.rows
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.nrows(), self.order);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t.rows[j][i] = v.clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.nrows(), "matrix shape mismatch");
        let mut out = Self::zeros(self.nrows(), other.cols, self.order);
        for (i, row) in self.rows.iter().enumerate() {
            for (k, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in other.rows[k].iter().enumerate() {
                    if !b.is_zero() {
                        out.rows[i][j] = &out.rows[i][j] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[CycloNum]) -> Vec<CycloNum> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(CycloNum::zero(self.order), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.nrows(), self.cols), (other.nrows(), other.cols));
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        Matrix {
            order: self.order,
            cols: self.cols,
            rows,
        }
    }

    pub fn minus_identity(&self) -> Matrix {
        assert_eq!(self.nrows(), self.cols);
        let mut m = self.clone();
        for i in 0..self.cols {
            m.rows[i][i] = &m.rows[i][i] - &CycloNum::one(self.order);
        }
        m
    }

    /// Appends the rows of `other` below `self`.
    pub fn vstack(&mut self, other: &Matrix) {
        assert_eq!(self.cols, other.cols);
        self.rows.extend(other.rows.iter().cloned());
    }

    pub fn rank(&self) -> usize {
        self.rank_with(Strategy::default())
    }

    pub fn rank_with(&self, strategy: Strategy) -> usize {
        let mut work = self.rows.clone();
        eliminate(&mut work, self.cols, false, strategy).len()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut work = self.rows.clone();
        let pivots = eliminate(&mut work, self.cols, true, Strategy::default());
        work.truncate(pivots.len());
        (
            Matrix {
                order: self.order,
                cols: self.cols,
                rows: work,
            },
            pivots,
        )
    }

    /// Basis of `{v : M v = 0}` from the reduced echelon form.
    pub fn nullspace(&self) -> Vec<Vec<CycloNum>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![CycloNum::zero(self.order); self.cols];
                v[f] = CycloNum::one(self.order);
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f);
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.nrows();
        if n != self.cols {
            return Err(Error::invalid("inverse of non-square matrix"));
        }
        let id = Self::identity(n, self.order);
        let mut work: Vec<Vec<CycloNum>> = self
            .rows
            .iter()
            .zip(id.rows)
            .map(|(a, b)| a.iter().cloned().chain(b).collect())
            .collect();
        let pivots = eliminate(&mut work, n, true, Strategy::default());
        if pivots.len() < n {
            return Err(Error::invalid("singular matrix"));
        }
        let rows = work.into_iter().map(|r| r[n..].to_vec()).collect();
        Ok(Matrix {
            order: self.order,
            cols: n,
            rows,
        })
    }
}

/// Incrementally maintained reduced row space; `insert` reports whether the
/// rank grew.
#[derive(Clone, Debug)]
pub struct RowSpace {
    order: u32,
    cols: usize,
    /// (pivot column, row normalized to 1 at the pivot and 0 at other pivots)
    basis: Vec<(usize, Vec<CycloNum>)>,
}

impl RowSpace {
    pub fn new(order: u32, cols: usize) -> Self {
        RowSpace {
            order,
            cols,
            basis: Vec::new(),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.cols
    }

    pub fn insert(&mut self, row: &[CycloNum]) -> bool {
        assert_eq!(row.len(), self.cols);
        let mut r = row.to_vec();
        for (p, b) in &self.basis {
            let f = r[*p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in r.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        let Some(p) = r.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("nonzero");
        let r: Vec<CycloNum> = r
            .iter()
            .map(|x| if x.is_zero() { x.clone() } else { x * &inv })
            .collect();
        for (_, b) in self.basis.iter_mut() {
            let f = b[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in b.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        self.basis.push((p, r));
        true
    }
}

/// In-place elimination over the first `ncols` columns; returns pivot columns.
/// `full` clears above pivots too (and normalizes them to 1).
fn eliminate(rows: &mut [Vec<CycloNum>], ncols: usize, full: bool, strategy: Strategy) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..ncols {
        if prow >= rows.len() {
            break;
        }
        let Some(best) = (prow..rows.len())
            .filter(|&r| !rows[r][col].is_zero())
            .min_by_key(|&r| rows[r][col].height())
        else {
            continue;
        };
        rows.swap(prow, best);
        let inv = rows[prow][col].inv().expect("pivot is nonzero");
        let pivot_row: Vec<CycloNum> = rows[prow]
            .iter()
            .map(|x| if x.is_zero() { x.clone() } else { x * &inv })
            .collect();
        rows[prow] = pivot_row.clone();
        let (head, tail) = rows.split_at_mut(prow);
        let update = |_: usize, row: &mut Vec<CycloNum>| {
            let f = row[col].clone();
            if f.is_zero() {
                return;
            }
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *x = &*x - &(&f * p);
                }
            }
        };
        par::for_each_mut(strategy, &mut tail[1..], update);
        if full {
            par::for_each_mut(strategy, head, update);
        }
        pivots.push(col);
        prow += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> CycloNum {
        CycloNum::from_int(1, n)
    }

    #[test]
    fn rank_and_nullspace() {
        let m = Matrix::from_rows(
            1,
            3,
            vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(1), q(0), q(1)]],
        )
        .unwrap();
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(CycloNum::is_zero));
        assert_eq!(m.rank_with(Strategy::Sequential), m.rank_with(Strategy::Parallel));
        let mut rs = RowSpace::new(1, 3);
        assert!(m.rows().iter().filter(|r| rs.insert(r)).count() == 2);
        assert!(!rs.is_full());
    }

    #[test]
    fn inverse_over_gaussian_integers() {
        let i = CycloNum::zeta(4);
        let one = CycloNum::one(4);
        let m = Matrix::from_rows(4, 2, vec![vec![one.clone(), i.clone()], vec![i.clone(), &one + &one]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2, 4));
        let sing = Matrix::from_rows(4, 2, vec![vec![one.clone(), i.clone()], vec![i.clone(), -&one]]).unwrap();
        assert!(sing.inverse().is_err());
    }
}
