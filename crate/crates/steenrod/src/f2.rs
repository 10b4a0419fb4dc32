//! Dense linear algebra over F_2 on 64-bit words.
//!
//! Vectors and matrices here are tiny (dimensions well under a few hundred),
//! so everything is plain Gaussian elimination on bit-packed rows.

use crate::error::{Error, Result};

/// Bit vector of a fixed length.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zero(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn toggle(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of the set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn from_ones(len: usize, ones: &[usize]) -> Self {
        let mut v = BitVec::zero(len);
        for &i in ones {
            v.toggle(i);
        }
        v
    }
}

/// Row-major bit matrix: `rows[r]` holds row `r`, one bit per column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMat {
    pub cols: usize,
    pub rows: Vec<BitVec>,
}

impl BitMat {
    pub fn zero(nrows: usize, cols: usize) -> Self {
        BitMat {
            cols,
            rows: vec![BitVec::zero(cols); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMat::zero(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    pub fn push_row(&mut self, row: BitVec) {
        assert_eq!(row.len(), self.cols, "row width mismatch");
        self.rows.push(row);
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.rows[r].set(c, v);
    }

    /// Matrix-vector product over F_2, viewing `x` as a column vector.
    pub fn apply(&self, x: &BitVec) -> BitVec {
        debug_assert_eq!(x.len(), self.cols);
        let mut y = BitVec::zero(self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc = 0u64;
            for (a, b) in row.words.iter().zip(&x.words) {
                acc ^= a & b;
            }
            if acc.count_ones() % 2 == 1 {
                y.set(r, true);
            }
        }
        y
    }

    pub fn xor_assign(&mut self, other: &BitMat) {
        debug_assert_eq!(self.cols, other.cols);
        debug_assert_eq!(self.nrows(), other.nrows());
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            a.xor_assign(b);
        }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &BitMat) -> BitMat {
        debug_assert_eq!(self.cols, rhs.nrows());
        let mut out = BitMat::zero(self.nrows(), rhs.cols);
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                out.rows[r].xor_assign(&rhs.rows[c]);
            }
        }
        out
    }

    /// Assemble a matrix from its columns.
    pub fn from_columns(nrows: usize, columns: &[BitVec]) -> BitMat {
        let mut m = BitMat::zero(nrows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            debug_assert_eq!(col.len(), nrows);
            for r in col.ones() {
                m.rows[r].set(c, true);
            }
        }
        m
    }

    /// Column `c` as a vector.
    pub fn column(&self, c: usize) -> BitVec {
        let mut v = BitVec::zero(self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            if row.get(c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_zero())
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<BitVec> = self.rows.iter().filter(|r| !r.is_zero()).cloned().collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(c) {
                    row.xor_assign(&pivot);
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn kernel(&self) -> Vec<BitVec> {
        let (rref, pivots) = self.rref();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut x = BitVec::zero(self.cols);
            x.set(free, true);
            for (r, &pc) in pivots.iter().enumerate() {
                if rref[r].get(free) {
                    x.set(pc, true);
                }
            }
            basis.push(x);
        }
        basis
    }

    /// Reduced row echelon form; returns the nonzero rows and their pivot columns.
    pub fn rref(&self) -> (Vec<BitVec>, Vec<usize>) {
        let mut rows: Vec<BitVec> = self.rows.iter().filter(|r| !r.is_zero()).cloned().collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(c) {
                    row.xor_assign(&pivot);
                }
            }
            pivots.push(c);
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rows.truncate(rank);
        (rows, pivots)
    }

    /// Solve `self * x = b` for the unique `x`; errors when the system is
    /// singular (no solution or more than one).
    pub fn solve_unique(&self, b: &BitVec) -> Result<BitVec> {
        debug_assert_eq!(b.len(), self.nrows());
        let mut rows: Vec<(BitVec, bool)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), b.get(i)))
            .collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].0.get(c)) else {
                continue;
            };
            rows.swap(rank, p);
            let (prow, pb) = rows[rank].clone();
            for (r, (row, rb)) in rows.iter_mut().enumerate() {
                if r != rank && row.get(c) {
                    row.xor_assign(&prow);
                    *rb ^= pb;
                }
            }
            pivots.push((rank, c));
            rank += 1;
        }
        if rank < self.cols {
            return Err(Error::SingularSystem(format!(
                "rank {rank} < {} unknowns",
                self.cols
            )));
        }
        for (row, rb) in rows.iter().skip(rank) {
            debug_assert!(row.is_zero());
            if *rb {
                return Err(Error::SingularSystem("inconsistent right-hand side".into()));
            }
        }
        let mut x = BitVec::zero(self.cols);
        for &(r, c) in &pivots {
            if rows[r].1 {
                x.set(c, true);
            }
        }
        Ok(x)
    }

    /// Inverse of a square matrix, or an error when singular.
    pub fn inverse(&self) -> Result<BitMat> {
        let n = self.nrows();
        if n != self.cols {
            return Err(Error::SingularSystem("not square".into()));
        }
        let mut rows = self.rows.clone();
        let mut inv = BitMat::identity(n);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| rows[r].get(c)) else {
                return Err(Error::SingularSystem(format!("no pivot in column {c}")));
            };
            rows.swap(c, p);
            inv.rows.swap(c, p);
            let prow = rows[c].clone();
            let pinv = inv.rows[c].clone();
            for r in 0..n {
                if r != c && rows[r].get(c) {
                    rows[r].xor_assign(&prow);
                    inv.rows[r].xor_assign(&pinv);
                }
            }
        }
        Ok(inv)
    }
}

/// Reduced row echelon form computed with a caller-chosen column priority:
/// pivots are searched along `col_order` rather than left to right.  Used to
/// rewrite quotient presentations so that pivots avoid a preferred basis.
pub struct Rref {
    pub rows: Vec<BitVec>,
    pub pivot_cols: Vec<usize>,
}

impl Rref {
    pub fn new(raw_rows: &[BitVec], cols: usize, col_order: &[usize]) -> Self {
        debug_assert_eq!(col_order.len(), cols);
        let mut rows: Vec<BitVec> = raw_rows.iter().filter(|r| !r.is_zero()).cloned().collect();
        let mut pivot_cols = Vec::new();
        let mut rank = 0;
        for &c in col_order {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(c) {
                    row.xor_assign(&pivot);
                }
            }
            pivot_cols.push(c);
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rows.truncate(rank);
        Rref { rows, pivot_cols }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` modulo the row space: clear every pivot coordinate.
    pub fn reduce(&self, v: &mut BitVec) {
        for (row, &c) in self.rows.iter().zip(&self.pivot_cols) {
            if v.get(c) {
                v.xor_assign(row);
            }
        }
    }
}

/// Rank of the span of `vecs` (each of length `cols`).
pub fn span_rank(vecs: &[BitVec], cols: usize) -> usize {
    BitMat {
        cols,
        rows: vecs.to_vec(),
    }
    .rank()
}

/// Does `v` lie in the span of `vecs`?
pub fn in_span(vecs: &[BitVec], v: &BitVec) -> bool {
    let cols = v.len();
    let base = span_rank(vecs, cols);
    let mut all = vecs.to_vec();
    all.push(v.clone());
    span_rank(&all, cols) == base
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel() {
        // rows: 110, 011, 101  (third = first + second, rank 2)
        let m = BitMat {
            cols: 3,
            rows: vec![
                BitVec::from_ones(3, &[0, 1]),
                BitVec::from_ones(3, &[1, 2]),
                BitVec::from_ones(3, &[0, 2]),
            ],
        };
        assert_eq!(m.rank(), 2);
        let ker = m.kernel();
        assert_eq!(ker.len(), 1);
        assert_eq!(ker[0], BitVec::from_ones(3, &[0, 1, 2]));
        for k in &ker {
            assert!(m.apply(k).is_zero());
        }
    }

    #[test]
    fn solve_and_invert() {
        let m = BitMat {
            cols: 3,
            rows: vec![
                BitVec::from_ones(3, &[0]),
                BitVec::from_ones(3, &[0, 1]),
                BitVec::from_ones(3, &[1, 2]),
            ],
        };
        let b = BitVec::from_ones(3, &[0, 2]);
        let x = m.solve_unique(&b).unwrap();
        assert_eq!(m.apply(&x), b);
        let inv = m.inverse().unwrap();
        assert_eq!(inv.apply(&b), x);
    }

    #[test]
    fn rref_with_priority_avoids_preferred_columns() {
        // single row 110; prefer pivoting column 1 before column 0
        let rows = vec![BitVec::from_ones(3, &[0, 1])];
        let rref = Rref::new(&rows, 3, &[1, 2, 0]);
        assert_eq!(rref.pivot_cols, vec![1]);
        let mut v = BitVec::from_ones(3, &[1]);
        rref.reduce(&mut v);
        assert_eq!(v, BitVec::from_ones(3, &[0]));
    }
}
