//! Bounded-degree graded modules over the mod-2 Steenrod algebra.
//!
//! A [`ModuleWindow`] stores the rows of a graded module in degrees
//! `0..=window` together with the matrices of every `Sq^i` the window can
//! see.  Matrices and vectors live over F_2 but may depend affinely on a
//! shared family of correction parameters `e_1..e_p`: F_2-valued unknowns
//! recording structure constants that are pinned down only up to a summand
//! in a designated "boundary" block.  Every value is kept as
//! `base + sum_k eps[k] * e_k`.
//!
//! The affine representation is closed under the operations used here
//! because all constructions keep parameter parts inside the boundary
//! block while nothing maps the boundary block back out of itself, so a
//! product of two parameter parts is always the zero map.  Squares of a
//! single parameter fold back linearly (`e_k^2 = e_k` for an F_2-valued
//! unknown) and are handled exactly; genuinely quadratic cross terms are
//! rejected rather than silently dropped.

pub mod cofiber;
pub mod smash;
pub mod thom;

use crate::algebra::{adem_pair, SqMonomial};
use crate::error::{Error, Result};
use crate::f2::{BitMat, BitVec};
use std::collections::BTreeMap;

/// Vector whose entries depend affinely on the correction parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineVec {
    pub base: BitVec,
    pub eps: Vec<BitVec>,
}

impl AffineVec {
    pub fn zero(len: usize, nparams: usize) -> Self {
        AffineVec {
            base: BitVec::zero(len),
            eps: vec![BitVec::zero(len); nparams],
        }
    }

    pub fn exact(base: BitVec, nparams: usize) -> Self {
        let len = base.len();
        AffineVec {
            base,
            eps: vec![BitVec::zero(len); nparams],
        }
    }

    pub fn unit(len: usize, nparams: usize, idx: usize) -> Self {
        let mut v = AffineVec::zero(len, nparams);
        v.base.set(idx, true);
        v
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn nparams(&self) -> usize {
        self.eps.len()
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero() && self.eps.iter().all(BitVec::is_zero)
    }

    /// True when no entry depends on a parameter.
    pub fn is_exact(&self) -> bool {
        self.eps.iter().all(BitVec::is_zero)
    }

    pub fn xor_assign(&mut self, other: &AffineVec) {
        debug_assert_eq!(self.nparams(), other.nparams());
        self.base.xor_assign(&other.base);
        for (a, b) in self.eps.iter_mut().zip(&other.eps) {
            a.xor_assign(b);
        }
    }

    /// Value at one parameter assignment (bit `k` of `assignment` is `e_k`).
    pub fn specialize(&self, assignment: u32) -> BitVec {
        debug_assert!(self.nparams() <= 32);
        let mut v = self.base.clone();
        for (k, e) in self.eps.iter().enumerate() {
            if assignment >> k & 1 == 1 {
                v.xor_assign(e);
            }
        }
        v
    }
}

/// Matrix whose entries depend affinely on the correction parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMatrix {
    pub base: BitMat,
    pub eps: Vec<BitMat>,
}

impl AffineMatrix {
    pub fn zero(nrows: usize, ncols: usize, nparams: usize) -> Self {
        AffineMatrix {
            base: BitMat::zero(nrows, ncols),
            eps: vec![BitMat::zero(nrows, ncols); nparams],
        }
    }

    pub fn exact(base: BitMat, nparams: usize) -> Self {
        let (r, c) = (base.nrows(), base.cols);
        AffineMatrix {
            base,
            eps: vec![BitMat::zero(r, c); nparams],
        }
    }

    pub fn identity(n: usize, nparams: usize) -> Self {
        AffineMatrix::exact(BitMat::identity(n), nparams)
    }

    pub fn nrows(&self) -> usize {
        self.base.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.base.cols
    }

    pub fn nparams(&self) -> usize {
        self.eps.len()
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero() && self.eps.iter().all(BitMat::is_zero)
    }

    pub fn is_exact(&self) -> bool {
        self.eps.iter().all(BitMat::is_zero)
    }

    pub fn set_column(&mut self, c: usize, v: &AffineVec) {
        debug_assert_eq!(v.len(), self.nrows());
        debug_assert_eq!(v.nparams(), self.nparams());
        for r in v.base.ones() {
            self.base.set(r, c, true);
        }
        for (k, e) in v.eps.iter().enumerate() {
            for r in e.ones() {
                self.eps[k].set(r, c, true);
            }
        }
    }

    pub fn column(&self, c: usize) -> AffineVec {
        AffineVec {
            base: self.base.column(c),
            eps: self.eps.iter().map(|e| e.column(c)).collect(),
        }
    }

    pub fn xor_assign(&mut self, other: &AffineMatrix) {
        self.base.xor_assign(&other.base);
        for (a, b) in self.eps.iter_mut().zip(&other.eps) {
            a.xor_assign(b);
        }
    }

    /// `self * v`.  Squares of one parameter fold back linearly; cross
    /// products of two distinct parameters must vanish.
    pub fn apply(&self, v: &AffineVec) -> AffineVec {
        debug_assert_eq!(v.len(), self.ncols());
        debug_assert_eq!(v.nparams(), self.nparams());
        let mut out = AffineVec {
            base: self.base.apply(&v.base),
            eps: Vec::with_capacity(self.nparams()),
        };
        for k in 0..self.nparams() {
            let mut e = self.base.apply(&v.eps[k]);
            e.xor_assign(&self.eps[k].apply(&v.base));
            e.xor_assign(&self.eps[k].apply(&v.eps[k]));
            out.eps.push(e);
        }
        #[cfg(debug_assertions)]
        for (k, me) in self.eps.iter().enumerate() {
            if me.is_zero() {
                continue;
            }
            for (l, ve) in v.eps.iter().enumerate() {
                if k != l && !me.apply(ve).is_zero() {
                    panic!("quadratic parameter term e{k}*e{l} in apply");
                }
            }
        }
        out
    }

    /// `self ∘ inner`, with the same parameter-product discipline as
    /// [`AffineMatrix::apply`].
    pub fn compose(&self, inner: &AffineMatrix) -> AffineMatrix {
        debug_assert_eq!(self.ncols(), inner.nrows());
        debug_assert_eq!(self.nparams(), inner.nparams());
        let mut out = AffineMatrix {
            base: self.base.mul(&inner.base),
            eps: Vec::with_capacity(self.nparams()),
        };
        for k in 0..self.nparams() {
            let mut e = self.base.mul(&inner.eps[k]);
            e.xor_assign(&self.eps[k].mul(&inner.base));
            e.xor_assign(&self.eps[k].mul(&inner.eps[k]));
            out.eps.push(e);
        }
        #[cfg(debug_assertions)]
        for (k, me) in self.eps.iter().enumerate() {
            if me.is_zero() {
                continue;
            }
            for (l, ie) in inner.eps.iter().enumerate() {
                if k != l && !me.mul(ie).is_zero() {
                    panic!("quadratic parameter term e{k}*e{l} in compose");
                }
            }
        }
        out
    }

    pub fn specialize(&self, assignment: u32) -> BitMat {
        debug_assert!(self.nparams() <= 32);
        let mut m = self.base.clone();
        for (k, e) in self.eps.iter().enumerate() {
            if assignment >> k & 1 == 1 {
                m.xor_assign(e);
            }
        }
        m
    }
}

/// Row reduction of affine rows, pivoting on the base parts along a
/// caller-chosen column order.  The pivot structure must not depend on the
/// parameters: a row whose base part dies while a parameter part survives
/// means the span genuinely varies with the assignment, and parameter
/// parts touching a pivot column would make the reduced coordinates
/// quadratic in the parameters; both are reported as errors.
#[derive(Debug)]
pub struct AffineRref {
    cols: usize,
    rows: Vec<AffineVec>,
    pivot_cols: Vec<usize>,
}

impl AffineRref {
    pub fn new(
        raw: Vec<AffineVec>,
        cols: usize,
        nparams: usize,
        col_order: &[usize],
    ) -> Result<Self> {
        debug_assert_eq!(col_order.len(), cols);
        let mut rows: Vec<AffineVec> = raw.into_iter().filter(|r| !r.is_zero()).collect();
        for r in &rows {
            debug_assert_eq!(r.len(), cols);
            debug_assert_eq!(r.nparams(), nparams);
        }
        let mut pivot_cols = Vec::new();
        let mut rank = 0;
        for &c in col_order {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].base.get(c)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.base.get(c) {
                    row.xor_assign(&pivot);
                }
            }
            pivot_cols.push(c);
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        for row in rows.iter().skip(rank) {
            if !row.is_zero() {
                return Err(Error::Invalid(
                    "relation span varies with the correction parameters \
                     (a row reduced to a parameter-only remainder)"
                        .into(),
                ));
            }
        }
        rows.truncate(rank);
        for row in &rows {
            for &c in &pivot_cols {
                if row.eps.iter().any(|e| e.get(c)) {
                    return Err(Error::Invalid(
                        "pivot structure depends on the correction parameters \
                         (a parameter part touches a pivot column)"
                            .into(),
                    ));
                }
            }
        }
        Ok(AffineRref {
            cols,
            rows,
            pivot_cols,
        })
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivot_cols
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Clear every pivot coordinate of `v` by subtracting multiples of the
    /// pivot rows.  The multiple of a pivot row is itself affine in the
    /// parameters; squares fold linearly, cross products are errors.
    pub fn reduce(&self, v: &mut AffineVec) -> Result<()> {
        debug_assert_eq!(v.len(), self.cols);
        for (row, &c) in self.rows.iter().zip(&self.pivot_cols) {
            let k0 = v.base.get(c);
            let ks: Vec<usize> = (0..v.nparams()).filter(|&k| v.eps[k].get(c)).collect();
            if !ks.is_empty() {
                let row_param_support: Vec<usize> = (0..row.eps.len())
                    .filter(|&l| !row.eps[l].is_zero())
                    .collect();
                for &k in &ks {
                    for &l in &row_param_support {
                        if l != k {
                            return Err(Error::Invalid(format!(
                                "reduction would create a quadratic term e{k}*e{l}"
                            )));
                        }
                    }
                }
            }
            if k0 {
                v.xor_assign(row);
            }
            for &k in &ks {
                v.eps[k].xor_assign(&row.base);
                v.eps[k].xor_assign(&row.eps[k]);
            }
        }
        Ok(())
    }
}

/// A graded F_2 module seen through a degree window, with the matrices of
/// `Sq^i` between the rows the window can see.
pub struct ModuleWindow {
    pub name: String,
    pub window: u32,
    pub nparams: usize,
    pub dims: Vec<usize>,
    pub labels: Vec<Vec<String>>,
    sq: BTreeMap<(u32, u32), AffineMatrix>,
}

impl ModuleWindow {
    pub fn new(
        name: impl Into<String>,
        window: u32,
        nparams: usize,
        dims: Vec<usize>,
        labels: Vec<Vec<String>>,
    ) -> Self {
        debug_assert_eq!(dims.len(), window as usize + 1);
        debug_assert_eq!(labels.len(), dims.len());
        for (d, l) in dims.iter().zip(&labels) {
            debug_assert_eq!(*d, l.len());
        }
        ModuleWindow {
            name: name.into(),
            window,
            nparams,
            dims,
            labels,
            sq: BTreeMap::new(),
        }
    }

    pub fn insert_sq(&mut self, i: u32, j: u32, m: AffineMatrix) {
        debug_assert!(i >= 1 && j + i <= self.window);
        debug_assert_eq!(m.ncols(), self.dims[j as usize]);
        debug_assert_eq!(m.nrows(), self.dims[(j + i) as usize]);
        debug_assert_eq!(m.nparams(), self.nparams);
        self.sq.insert((i, j), m);
    }

    pub fn dim(&self, j: u32) -> usize {
        self.dims[j as usize]
    }

    pub fn row_labels(&self, j: u32) -> &[String] {
        &self.labels[j as usize]
    }

    pub fn sq_matrix(&self, i: u32, j: u32) -> Option<&AffineMatrix> {
        self.sq.get(&(i, j))
    }

    pub fn basis_vector(&self, j: u32, idx: usize) -> AffineVec {
        AffineVec::unit(self.dim(j), self.nparams, idx)
    }

    /// `Sq^i` applied to a degree-`j` vector; refuses to leave the window.
    pub fn act(&self, i: u32, j: u32, v: &AffineVec) -> Result<AffineVec> {
        debug_assert_eq!(v.len(), self.dim(j));
        if i == 0 {
            return Ok(v.clone());
        }
        if j + i > self.window {
            return Err(Error::WindowExceeded {
                deg: j + i,
                window: self.window,
            });
        }
        let m = self
            .sq
            .get(&(i, j))
            .unwrap_or_else(|| panic!("{}: missing Sq{i} at degree {j}", self.name));
        Ok(m.apply(v))
    }

    /// Apply a composite word, rightmost factor first; returns the target
    /// degree with the image.
    pub fn act_word(&self, word: &SqMonomial, j: u32, v: &AffineVec) -> Result<(u32, AffineVec)> {
        let mut deg = j;
        let mut cur = v.clone();
        for &i in word.exponents().iter().rev() {
            cur = self.act(i, deg, &cur)?;
            deg += i;
        }
        Ok((deg, cur))
    }

    /// Pretty-print the base part of a vector in the row's labels.
    pub fn show_base(&self, j: u32, v: &BitVec) -> String {
        let names: Vec<&str> = v
            .ones()
            .map(|i| self.labels[j as usize][i].as_str())
            .collect();
        if names.is_empty() {
            "0".to_string()
        } else {
            names.join(" + ")
        }
    }

    /// Exhaustive check that the stored matrices satisfy every composition
    /// identity `Sq^a Sq^b = sum_c binom(b-1-c, a-2c) Sq^{a+b-c} Sq^c`
    /// visible in the window; returns a description of each failure.
    pub fn adem_failures(&self) -> Vec<String> {
        let mut failures = Vec::new();
        for b in 1..=self.window {
            for a in 1..2 * b {
                if a + b > self.window {
                    break;
                }
                for j in 0..=self.window - a - b {
                    if self.dim(j) == 0 || self.dim(j + a + b) == 0 {
                        continue;
                    }
                    let lhs = self
                        .sq_matrix(a, j + b)
                        .unwrap()
                        .compose(self.sq_matrix(b, j).unwrap());
                    let mut rhs =
                        AffineMatrix::zero(self.dim(j + a + b), self.dim(j), self.nparams);
                    let expansion = adem_pair(a, b).expect("0 < a < 2b by construction");
                    for term in expansion.terms() {
                        match *term.exponents() {
                            [x] => rhs.xor_assign(self.sq_matrix(x, j).unwrap()),
                            [x, y] => rhs.xor_assign(
                                &self.sq_matrix(x, j + y).unwrap().compose(
                                    self.sq_matrix(y, j).unwrap(),
                                ),
                            ),
                            _ => unreachable!("a two-factor word expands to words of length <= 2"),
                        }
                    }
                    if lhs != rhs {
                        failures.push(format!(
                            "{}: Sq{a} Sq{b} differs from its admissible expansion on degree {j}",
                            self.name
                        ));
                    }
                }
            }
        }
        failures
    }
}
