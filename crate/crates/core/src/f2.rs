//! Dense linear algebra over the two-element field.
//!
//! Vectors and matrix rows are bit-packed into `u64` words. Matrices act on
//! column vectors: an `r × c` matrix maps `F2^c` to `F2^r`.
//!
//! Every elimination uses the leftmost pivot column with the topmost
//! candidate row, so bases returned from here are canonical functions of
//! their inputs.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest number of entries a matrix may hold.
pub const MAX_ENTRIES: usize = 1 << 26;

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A vector over F2 of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vector {
    len: usize,
    words: Vec<u64>,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        F2Vector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    /// Builds a vector from 0/1 entries; any nonzero byte counts as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set entry.
    pub fn first_one(&self) -> Option<usize> {
        self.first_one_from(0)
    }

    /// Index of the lowest set entry at position `start` or later.
    pub fn first_one_from(&self, start: usize) -> Option<usize> {
        if start >= self.len {
            return None;
        }
        let mut w = start / WORD;
        let mut word = self.words[w] & (!0u64 << (start % WORD));
        loop {
            if word != 0 {
                return Some(w * WORD + word.trailing_zeros() as usize);
            }
            w += 1;
            if w >= self.words.len() {
                return None;
            }
            word = self.words[w];
        }
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut word = w;
            core::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let t = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(wi * WORD + t)
                }
            })
        })
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &F2Vector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    #[inline]
    fn xor_assign_from_word(&mut self, other: &F2Vector, start_word: usize) {
        for (a, b) in self.words[start_word..].iter_mut().zip(&other.words[start_word..]) {
            *a ^= *b;
        }
    }

    pub fn dot(&self, other: &F2Vector) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones();
        }
        acc & 1 == 1
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Concatenation `self ⊕ other`.
    pub fn concat(&self, other: &F2Vector) -> F2Vector {
        let mut out = F2Vector::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Entries `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> F2Vector {
        assert!(start + len <= self.len);
        let mut out = F2Vector::zeros(len);
        for i in self.ones() {
            if i >= start && i < start + len {
                out.set(i - start, true);
            }
        }
        out
    }
}

impl core::ops::Add for &F2Vector {
    type Output = F2Vector;
    fn add(self, rhs: &F2Vector) -> F2Vector {
        let mut out = self.clone();
        out.xor_assign(rhs);
        out
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        f.write_str("]")
    }
}

/// A dense `rows × cols` matrix over F2, stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<F2Vector>,
}

fn check_size(rows: usize, cols: usize) -> Result<()> {
    match rows.checked_mul(cols) {
        Some(n) if n <= MAX_ENTRIES => Ok(()),
        _ => Err(Error::SizeLimit {
            what: "matrix",
            size: rows.saturating_mul(cols),
            limit: MAX_ENTRIES,
        }),
    }
}

/// Result of reducing a matrix to reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Rref {
    /// The reduced matrix; rows past `pivots.len()` are zero.
    pub matrix: F2Matrix,
    /// Pivot column of each nonzero row, strictly increasing.
    pub pivots: Vec<usize>,
}

impl F2Matrix {
    pub fn try_zeros(rows: usize, cols: usize) -> Result<Self> {
        check_size(rows, cols)?;
        Ok(F2Matrix {
            rows,
            cols,
            data: vec![F2Vector::zeros(cols); rows],
        })
    }

    /// # Panics
    /// If `rows × cols` exceeds [`MAX_ENTRIES`].
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::try_zeros(rows, cols).expect("matrix size limit")
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].set(i, true);
        }
        m
    }

    /// Builds a matrix from rows that all have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<F2Vector>) -> Result<Self> {
        check_size(rows.len(), cols)?;
        for r in &rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "matrix row",
                    expected: cols,
                    found: r.len(),
                });
            }
        }
        Ok(F2Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[F2Vector]) -> Result<Self> {
        check_size(rows, columns.len())?;
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    context: "matrix column",
                    expected: rows,
                    found: c.len(),
                });
            }
            for i in c.ones() {
                m.data[i].set(j, true);
            }
        }
        Ok(m)
    }

    /// Builds a matrix from nested 0/1 rows. An empty outer list gives a `0 × cols` matrix.
    pub fn from_bits(cols: usize, rows: &[Vec<u8>]) -> Result<Self> {
        Self::from_rows(cols, rows.iter().map(|r| F2Vector::from_bits(r)).collect())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value)
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r].flip(c)
    }

    pub fn row(&self, r: usize) -> &F2Vector {
        &self.data[r]
    }

    pub fn row_vectors(&self) -> &[F2Vector] {
        &self.data
    }

    pub fn column(&self, c: usize) -> F2Vector {
        let mut v = F2Vector::zeros(self.rows);
        for (r, row) in self.data.iter().enumerate() {
            if row.get(c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn columns(&self) -> Vec<F2Vector> {
        self.transpose().data
    }

    pub fn to_bits(&self) -> Vec<Vec<u8>> {
        self.data.iter().map(F2Vector::to_bits).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F2Vector::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self
                .data
                .iter()
                .enumerate()
                .all(|(i, r)| r.count_ones() == 1 && r.get(i))
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.ones() {
                t.data[c].set(r, true);
            }
        }
        t
    }

    /// The image `M x`.
    pub fn mul_vec(&self, x: &F2Vector) -> F2Vector {
        assert_eq!(x.len(), self.cols, "vector length does not match column count");
        let mut out = F2Vector::zeros(self.rows);
        for (r, row) in self.data.iter().enumerate() {
            if row.dot(x) {
                out.set(r, true);
            }
        }
        out
    }

    /// The product `self · rhs`.
    pub fn mul(&self, rhs: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions do not agree");
        let mut out = F2Matrix::zeros(self.rows, rhs.cols);
        for (r, row) in self.data.iter().enumerate() {
            let acc = &mut out.data[r];
            for k in row.ones() {
                acc.xor_assign(&rhs.data[k]);
            }
        }
        out
    }

    pub fn add(&self, rhs: &F2Matrix) -> F2Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            a.xor_assign(b);
        }
        out
    }

    /// `[self; lower]`, stacking rows.
    pub fn vstack(&self, lower: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, lower.cols);
        let mut data = self.data.clone();
        data.extend(lower.data.iter().cloned());
        F2Matrix::from_rows(self.cols, data).expect("matrix size limit")
    }

    /// `[self | right]`, placing columns side by side.
    pub fn hstack(&self, right: &F2Matrix) -> F2Matrix {
        assert_eq!(self.rows, right.rows);
        let data = self
            .data
            .iter()
            .zip(&right.data)
            .map(|(a, b)| a.concat(b))
            .collect();
        F2Matrix::from_rows(self.cols + right.cols, data).expect("matrix size limit")
    }

    /// Block diagonal matrix `diag(self, other)`.
    pub fn direct_sum(&self, other: &F2Matrix) -> F2Matrix {
        let top = self.hstack(&F2Matrix::zeros(self.rows, other.cols));
        let bottom = F2Matrix::zeros(other.rows, self.cols).hstack(other);
        top.vstack(&bottom)
    }

    /// The submatrix on the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> F2Matrix {
        let mut out = F2Matrix::zeros(self.rows, cols.len());
        for (r, row) in self.data.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                if row.get(c) {
                    out.data[r].set(j, true);
                }
            }
        }
        out
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        Rref { matrix: m, pivots }
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut top = 0;
        for c in 0..self.cols {
            if top == self.rows {
                break;
            }
            let Some(p) = (top..self.rows).find(|&r| self.data[r].get(c)) else {
                continue;
            };
            self.data.swap(top, p);
            let pivot_row = core::mem::replace(&mut self.data[top], F2Vector::zeros(0));
            let w = c / WORD;
            for (r, row) in self.data.iter_mut().enumerate() {
                if r != top && row.get(c) {
                    row.xor_assign_from_word(&pivot_row, w);
                }
            }
            self.data[top] = pivot_row;
            pivots.push(c);
            top += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows <= self.cols {
            self.rref().pivots.len()
        } else {
            self.transpose().rref().pivots.len()
        }
    }

    /// A basis of `{x : M x = 0}`, one vector per free column in increasing order.
    pub fn kernel_basis(&self) -> Subspace {
        let Rref { matrix, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|&f| !is_pivot[f]) {
            let mut v = F2Vector::unit(self.cols, f);
            for (r, &p) in pivots.iter().enumerate() {
                if matrix.data[r].get(f) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        Subspace {
            ambient_dim: self.cols,
            basis,
        }
    }

    /// The column space, as a subspace of `F2^rows` with a reduced basis.
    pub fn image(&self) -> Subspace {
        self.transpose().row_space()
    }

    /// The row space, as a subspace of `F2^cols` with its reduced echelon basis.
    pub fn row_space(&self) -> Subspace {
        let Rref { matrix, pivots } = self.rref();
        let mut data = matrix.data;
        data.truncate(pivots.len());
        Subspace {
            ambient_dim: self.cols,
            basis: data,
        }
    }

    /// Some `x` with `M x = b`, or `None` if `b` is not in the column space.
    pub fn solve(&self, b: &F2Vector) -> Result<Option<F2Vector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                context: "right-hand side of solve",
                expected: self.rows,
                found: b.len(),
            });
        }
        let mut rows: Vec<F2Vector> = self.data.clone();
        let mut rhs = b.clone();
        let mut pivots = Vec::new();
        let mut top = 0;
        for c in 0..self.cols {
            if top == self.rows {
                break;
            }
            let Some(p) = (top..self.rows).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(top, p);
            let bp = rhs.get(p);
            let bt = rhs.get(top);
            rhs.set(top, bp);
            rhs.set(p, bt);
            let pivot_row = core::mem::replace(&mut rows[top], F2Vector::zeros(0));
            let pivot_b = rhs.get(top);
            for r in 0..self.rows {
                if r != top && rows[r].get(c) {
                    rows[r].xor_assign_from_word(&pivot_row, c / WORD);
                    if pivot_b {
                        rhs.flip(r);
                    }
                }
            }
            rows[top] = pivot_row;
            pivots.push(c);
            top += 1;
        }
        if (top..self.rows).any(|r| rhs.get(r)) {
            return Ok(None);
        }
        let mut x = F2Vector::zeros(self.cols);
        for (r, &p) in pivots.iter().enumerate() {
            if rhs.get(r) {
                x.set(p, true);
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<F2Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(F2Matrix::zeros(0, 0));
        }
        let aug = self.hstack(&F2Matrix::identity(n));
        let Rref { matrix, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Some(matrix.select_columns(&cols))
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Matrix {}x{} [", self.rows, self.cols)?;
        for (i, r) in self.data.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r:?}")?;
        }
        f.write_str("]")
    }
}

/// A linear subspace of `F2^ambient_dim`, given by an independent list of vectors.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<F2Vector>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: (0..ambient_dim).map(|i| F2Vector::unit(ambient_dim, i)).collect(),
        }
    }

    /// Wraps a list that must already be independent.
    pub fn from_basis(ambient_dim: usize, basis: Vec<F2Vector>) -> Result<Self> {
        let mut ech = EchelonBasis::new(ambient_dim);
        for v in &basis {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    context: "subspace basis vector",
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
            if !ech.insert(v.clone()) {
                return Err(Error::InvalidArgument("basis vectors are linearly dependent".into()));
            }
        }
        Ok(Subspace { ambient_dim, basis })
    }

    /// The span of `vectors`, keeping the first independent ones in order.
    pub fn span(ambient_dim: usize, vectors: impl IntoIterator<Item = F2Vector>) -> Self {
        let mut ech = EchelonBasis::new(ambient_dim);
        let mut basis = Vec::new();
        for v in vectors {
            assert_eq!(v.len(), ambient_dim, "vector length does not match ambient dimension");
            if ech.insert(v.clone()) {
                basis.push(v);
            }
        }
        Subspace { ambient_dim, basis }
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[F2Vector] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<F2Vector> {
        self.basis
    }

    /// The basis as the rows of a `dim × ambient_dim` matrix.
    pub fn as_rows(&self) -> F2Matrix {
        F2Matrix::from_rows(self.ambient_dim, self.basis.clone()).expect("matrix size limit")
    }

    /// The basis as the columns of an `ambient_dim × dim` matrix.
    pub fn as_columns(&self) -> F2Matrix {
        F2Matrix::from_columns(self.ambient_dim, &self.basis).expect("matrix size limit")
    }

    pub fn echelon(&self) -> EchelonBasis {
        let mut ech = EchelonBasis::new(self.ambient_dim);
        for v in &self.basis {
            ech.insert(v.clone());
        }
        ech
    }

    pub fn contains(&self, v: &F2Vector) -> bool {
        self.echelon().contains(v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        let ech = self.echelon();
        other.basis.iter().all(|v| ech.contains(v))
    }

    pub fn same_span(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        Subspace::span(
            self.ambient_dim,
            self.basis.iter().chain(&other.basis).cloned(),
        )
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        // x in self ∩ other iff x = A a = B b, i.e. (a, b) in ker [A | B].
        let a = self.as_columns();
        let b = other.as_columns();
        let ker = a.hstack(&b).kernel_basis();
        Subspace::span(
            self.ambient_dim,
            ker.basis
                .iter()
                .map(|v| a.mul_vec(&v.slice(0, self.dim()))),
        )
    }

    /// Coordinates of `v` in this basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &F2Vector) -> Option<F2Vector> {
        self.as_columns().solve(v).expect("length checked by caller")
    }

    /// The image under `m`, spanned in basis order.
    pub fn map(&self, m: &F2Matrix) -> Subspace {
        Subspace::span(m.rows(), self.basis.iter().map(|v| m.mul_vec(v)))
    }

    /// `{x : m x ∈ self}` inside `F2^{m.cols}`.
    pub fn preimage(&self, m: &F2Matrix) -> Subspace {
        assert_eq!(m.rows(), self.ambient_dim);
        // x with m x in span(B): kernel of [m | B] projected to the x part.
        let b = self.as_columns();
        let ker = m.hstack(&b).kernel_basis();
        Subspace::span(m.cols(), ker.basis.iter().map(|v| v.slice(0, m.cols())))
    }
}

/// Returns `C` with `span(inner) ⊕ span(C) = span(outer)`, greedily taking
/// the basis vectors of `outer` in order.
pub fn complement(inner: &Subspace, outer: &Subspace) -> Result<Subspace> {
    if inner.ambient_dim != outer.ambient_dim {
        return Err(Error::DimensionMismatch {
            context: "complement",
            expected: outer.ambient_dim,
            found: inner.ambient_dim,
        });
    }
    if !outer.contains_subspace(inner) {
        return Err(Error::NotContained);
    }
    let mut ech = inner.echelon();
    let basis = outer
        .basis
        .iter()
        .filter(|v| ech.insert((*v).clone()))
        .cloned()
        .collect();
    Ok(Subspace {
        ambient_dim: outer.ambient_dim,
        basis,
    })
}

/// An incrementally built echelon basis supporting membership and reduction.
///
/// Each stored row is reduced against the rows before it, so reducing a
/// vector in insertion order clears every pivot.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    ambient_dim: usize,
    rows: Vec<F2Vector>,
    pivots: Vec<usize>,
    // Coefficients of each stored row in terms of the accepted input vectors.
    combos: Option<Vec<F2Vector>>,
    capacity: usize,
}

impl EchelonBasis {
    pub fn new(ambient_dim: usize) -> Self {
        EchelonBasis {
            ambient_dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: None,
            capacity: 0,
        }
    }

    /// Like [`EchelonBasis::new`] but also records how each row is built from
    /// the accepted inputs, enabling [`EchelonBasis::coordinates`].
    pub fn with_coordinates(ambient_dim: usize) -> Self {
        let cap = ambient_dim;
        EchelonBasis {
            ambient_dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: Some(Vec::new()),
            capacity: cap,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &mut F2Vector) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign_from_word(row, p / WORD);
            }
        }
    }

    fn reduce_tracked(&self, v: &mut F2Vector) -> F2Vector {
        let combos = self.combos.as_ref().expect("coordinate tracking enabled");
        let mut c = F2Vector::zeros(self.capacity);
        for ((row, &p), combo) in self.rows.iter().zip(&self.pivots).zip(combos) {
            if v.get(p) {
                v.xor_assign_from_word(row, p / WORD);
                c.xor_assign(combo);
            }
        }
        c
    }

    pub fn contains(&self, v: &F2Vector) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    /// Adds `v` if it is independent of the current rows; returns whether it was added.
    pub fn insert(&mut self, mut v: F2Vector) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "vector length does not match ambient dimension");
        if self.combos.is_some() {
            let mut c = self.reduce_tracked(&mut v);
            let Some(p) = v.first_one() else {
                return false;
            };
            c.set(self.rows.len(), true);
            self.rows.push(v);
            self.pivots.push(p);
            self.combos.as_mut().unwrap().push(c);
            true
        } else {
            self.reduce(&mut v);
            let Some(p) = v.first_one() else {
                return false;
            };
            self.rows.push(v);
            self.pivots.push(p);
            true
        }
    }

    /// Coefficients expressing `v` in the accepted inputs (in acceptance order).
    pub fn coordinates(&self, v: &F2Vector) -> Option<F2Vector> {
        let mut w = v.clone();
        let c = self.reduce_tracked(&mut w);
        if w.is_zero() {
            Some(c.slice(0, self.rows.len()))
        } else {
            None
        }
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> F2Matrix {
        let bits: Vec<Vec<u8>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(0..2u8)).collect())
            .collect();
        F2Matrix::from_bits(cols, &bits).unwrap()
    }

    // Independent elimination on plain byte grids, column-major pivot search.
    fn naive_rank(bits: &[Vec<u8>], cols: usize) -> usize {
        let mut m: Vec<Vec<u8>> = bits.to_vec();
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..m.len()).find(|&r| m[r][c] == 1) else {
                continue;
            };
            m.swap(rank, p);
            for r in 0..m.len() {
                if r != rank && m[r][c] == 1 {
                    for j in 0..cols {
                        m[r][j] ^= m[rank][j];
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn naive_apply(bits: &[Vec<u8>], x: u32) -> bool {
        bits.iter().all(|row| {
            row.iter()
                .enumerate()
                .filter(|&(j, &b)| b == 1 && (x >> j) & 1 == 1)
                .count()
                % 2
                == 0
        })
    }

    #[test]
    fn rank_small_cases() {
        assert_eq!(F2Matrix::identity(3).rank(), 3);
        let ones = F2Matrix::from_bits(2, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(ones.rank(), 1);
        assert_eq!(F2Matrix::zeros(0, 5).rank(), 0);
    }

    #[test]
    fn rank_matches_independent_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let r = rng.gen_range(0..10);
            let c = rng.gen_range(0..10);
            let m = random_matrix(&mut rng, r, c);
            assert_eq!(m.rank(), naive_rank(&m.to_bits(), c));
        }
        let m = random_matrix(&mut rng, 6, 6);
        assert_eq!(m.rank(), naive_rank(&m.to_bits(), 6));
    }

    #[test]
    fn kernel_small_cases() {
        assert_eq!(F2Matrix::identity(4).kernel_basis().dim(), 0);
        assert_eq!(F2Matrix::zeros(3, 4).kernel_basis().dim(), 4);
    }

    #[test]
    fn kernel_matches_exhaustive_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let r = rng.gen_range(0..8);
            let c = rng.gen_range(0..=12);
            let m = random_matrix(&mut rng, r, c);
            let bits = m.to_bits();
            let ker = m.kernel_basis();
            let ech = ker.echelon();
            let mut count = 0usize;
            for x in 0..(1u32 << c) {
                let v = F2Vector::from_indices(c, (0..c).filter(|j| (x >> j) & 1 == 1));
                let in_kernel = naive_apply(&bits, x);
                assert_eq!(in_kernel, ech.contains(&v));
                count += in_kernel as usize;
            }
            assert_eq!(count, 1usize << ker.dim());
        }
    }

    #[test]
    fn solve_small_cases() {
        let b = F2Vector::from_bits(&[1, 0, 1]);
        assert_eq!(F2Matrix::identity(3).solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(F2Matrix::zeros(3, 3).solve(&b).unwrap(), None);
        assert!(matches!(
            F2Matrix::zeros(2, 3).solve(&b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn solve_consistent_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let r = rng.gen_range(1..9);
            let c = rng.gen_range(1..9);
            let m = random_matrix(&mut rng, r, c);
            let x0 = F2Vector::from_indices(c, (0..c).filter(|_| rng.gen_bool(0.5)));
            let b = m.mul_vec(&x0);
            let x = m.solve(&b).unwrap().expect("consistent system");
            assert_eq!(m.mul_vec(&x), b);
        }
    }

    #[test]
    fn complement_small_cases() {
        let full = Subspace::full(4);
        assert_eq!(complement(&full, &full).unwrap().dim(), 0);
        assert_eq!(complement(&Subspace::zero(4), &full).unwrap().dim(), 4);
        let line = Subspace::span(4, [F2Vector::unit(4, 0)]);
        let other = Subspace::span(4, [F2Vector::unit(4, 1)]);
        assert_eq!(complement(&line, &other), Err(Error::NotContained));
    }

    #[test]
    fn complement_of_random_nested_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let n = rng.gen_range(1..12);
            let k = rng.gen_range(0..n + 1);
            let outer = random_matrix(&mut rng, k, n).row_space();
            let mut mixed = Vec::new();
            for v in outer.basis() {
                let mut w = v.clone();
                for u in outer.basis() {
                    if rng.gen_bool(0.3) {
                        w.xor_assign(u);
                    }
                }
                if rng.gen_bool(0.6) {
                    mixed.push(w);
                }
            }
            let inner = Subspace::span(n, mixed);
            let c = complement(&inner, &outer).unwrap();
            assert_eq!(c.dim() + inner.dim(), outer.dim());
            assert_eq!(inner.sum(&c).dim(), outer.dim());
            assert_eq!(complement(&inner, &outer).unwrap(), c);
        }
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut found = 0;
        while found < 30 {
            let m = random_matrix(&mut rng, 5, 5);
            match m.inverse() {
                Some(inv) => {
                    assert_eq!(m.mul(&inv), F2Matrix::identity(5));
                    found += 1;
                }
                None => assert!(m.rank() < 5),
            }
        }
    }

    #[test]
    fn intersection_and_preimage() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let n = rng.gen_range(1..7);
            let (ka, kb) = (rng.gen_range(0..n + 1), rng.gen_range(0..n + 1));
            let a = random_matrix(&mut rng, ka, n).row_space();
            let b = random_matrix(&mut rng, kb, n).row_space();
            let i = a.intersection(&b);
            assert_eq!(i.dim() + a.sum(&b).dim(), a.dim() + b.dim());
            assert!(a.contains_subspace(&i) && b.contains_subspace(&i));
            let c = rng.gen_range(0..7);
            let m = random_matrix(&mut rng, n, c);
            let pre = a.preimage(&m);
            for v in pre.basis() {
                assert!(a.contains(&m.mul_vec(v)));
            }
            let expected = m.kernel_basis().dim() + m.image().intersection(&a).dim();
            assert_eq!(pre.dim(), expected);
        }
    }

    #[test]
    fn tracked_coordinates() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let vs: Vec<F2Vector> = (0..8)
            .map(|_| F2Vector::from_indices(10, (0..10).filter(|_| rng.gen_bool(0.5))))
            .collect();
        let mut ech = EchelonBasis::with_coordinates(10);
        let accepted: Vec<F2Vector> = vs.iter().filter(|v| ech.insert((*v).clone())).cloned().collect();
        for v in &vs {
            let c = ech.coordinates(v).unwrap();
            let mut w = F2Vector::zeros(10);
            for i in c.ones() {
                w.xor_assign(&accepted[i]);
            }
            assert_eq!(&w, v);
        }
    }

    #[test]
    fn size_guardrail() {
        assert!(matches!(
            F2Matrix::try_zeros(1 << 14, 1 << 13),
            Err(Error::SizeLimit { .. })
        ));
    }

    fn arb_matrix() -> impl Strategy<Value = F2Matrix> {
        (0usize..9, 0usize..9).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(0u8..2, c), r)
                .prop_map(move |bits| F2Matrix::from_bits(c, &bits).unwrap())
        })
    }

    proptest! {
        #[test]
        fn rank_of_transpose(m in arb_matrix()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let ker = m.kernel_basis();
            prop_assert_eq!(ker.dim() + m.rank(), m.cols());
            for v in ker.basis() {
                prop_assert!(m.mul_vec(v).is_zero());
            }
        }

        #[test]
        fn solve_is_sound_and_complete(m in arb_matrix(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b = F2Vector::from_indices(m.rows(), (0..m.rows()).filter(|_| rng.gen_bool(0.5)));
            let augmented = m.hstack(&F2Matrix::from_columns(m.rows(), &[b.clone()]).unwrap());
            match m.solve(&b).unwrap() {
                Some(x) => prop_assert_eq!(m.mul_vec(&x), b),
                None => prop_assert!(augmented.rank() > m.rank()),
            }
        }
    }
}
