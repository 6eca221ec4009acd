//! Dense linear algebra over the two-element field.
//!
//! Vectors are bit-packed into `u64` words. Subspaces are always kept in
//! reduced row-echelon form, so two [`Subspace`] values describe the same
//! space exactly when they compare equal.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A vector in `GF(2)^len`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// The `i`-th standard basis vector.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector from 0/1 entries; any odd value counts as 1.
    pub fn from_u8s(entries: &[u8]) -> Self {
        Self::from_bits(entries.iter().map(|&e| e & 1 == 1))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "bit vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Parity of the coordinatewise product.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "bit vector length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn to_u8s(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// The sub-vector `self[start..start + len]`.
    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        let mut out = BitVector::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
    }

    /// Integer value with coordinate 0 as the most significant bit; this is
    /// the lexicographic position of the vector among all of `GF(2)^len`.
    pub fn lex_index(&self) -> usize {
        assert!(self.len < usize::BITS as usize);
        (0..self.len).fold(0usize, |acc, i| (acc << 1) | self.get(i) as usize)
    }

    /// Inverse of [`BitVector::lex_index`].
    pub fn from_lex_index(len: usize, index: usize) -> Self {
        Self::from_bits((0..len).map(|i| (index >> (len - 1 - i)) & 1 == 1))
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.len {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, ")")
    }
}

/// A dense matrix over GF(2), stored row by row.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf2Matrix {
            rows,
            cols,
            data: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from 0/1 rows. All rows must have the same length.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let data: Vec<BitVector> = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged matrix rows");
                BitVector::from_u8s(r)
            })
            .collect();
        Gf2Matrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    /// Builds a `rows x columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &BitVector {
        &self.data[r]
    }

    pub fn column(&self, c: usize) -> BitVector {
        BitVector::from_bits((0..self.rows).map(|r| self.get(r, c)))
    }

    pub fn columns(&self) -> Vec<BitVector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.data.iter().map(BitVector::to_u8s).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVector::is_zero)
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// `M x`.
    pub fn mul_vec(&self, x: &BitVector) -> BitVector {
        assert_eq!(x.len(), self.cols, "matrix-vector dimension mismatch");
        BitVector::from_bits(self.data.iter().map(|row| row.dot(x)))
    }

    /// `self * other`.
    pub fn mul(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Gf2Matrix::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            let mut acc = BitVector::zeros(other.cols);
            for k in row.ones() {
                acc.xor_assign(&other.data[k]);
            }
            out.data[r] = acc;
        }
        out
    }

    /// Row-reduces a copy of the matrix and returns the pivot columns of the
    /// reduced row-echelon form together with the reduced rows.
    fn rref(&self) -> (Vec<BitVector>, Vec<usize>) {
        let mut rows = self.data.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == rows.len() {
                break;
            }
            let Some(p) = (next..rows.len()).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(next, p);
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            next += 1;
        }
        rows.truncate(next);
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis of `{x : M x = 0}`.
    pub fn kernel(&self) -> Subspace {
        let (rows, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut gens = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVector::unit(self.cols, free);
            for (row, &p) in rows.iter().zip(&pivots) {
                if row.get(free) {
                    v.set(p, true);
                }
            }
            gens.push(v);
        }
        Subspace::from_generators(self.cols, gens)
    }

    /// The column space.
    pub fn image(&self) -> Subspace {
        Subspace::from_generators(self.rows, self.columns())
    }

    /// Image of a subspace of the domain.
    pub fn image_of(&self, s: &Subspace) -> Result<Subspace> {
        if s.ambient_dim() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: s.ambient_dim(),
            });
        }
        Ok(Subspace::from_generators(
            self.rows,
            s.basis().iter().map(|b| self.mul_vec(b)),
        ))
    }

    /// Some `x` with `M x = b`, if one exists.
    pub fn solve(&self, b: &BitVector) -> Option<BitVector> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let augmented: Vec<BitVector> = self
            .data
            .iter()
            .enumerate()
            .map(|(r, row)| row.concat(&BitVector::from_bits([b.get(r)])))
            .collect();
        let aug = Gf2Matrix {
            rows: self.rows,
            cols: self.cols + 1,
            data: augmented,
        };
        let (rows, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = BitVector::zeros(self.cols);
        for (row, &p) in rows.iter().zip(&pivots) {
            if row.get(self.cols) {
                x.set(p, true);
            }
        }
        Some(x)
    }

    /// Restriction to the rows in `rows` and the columns in `cols`.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Gf2Matrix {
        let mut m = Gf2Matrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> bool {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        self.rank() == self.rows
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{} [", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {:?}", row)?;
        }
        write!(f, "]")
    }
}

pub fn rank(m: &Gf2Matrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &Gf2Matrix) -> Subspace {
    m.kernel()
}

/// A linear subspace of `GF(2)^ambient_dim` in reduced row-echelon form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<BitVector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: (0..ambient_dim)
                .map(|i| BitVector::unit(ambient_dim, i))
                .collect(),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Span of the given vectors.
    pub fn from_generators<I>(ambient_dim: usize, gens: I) -> Self
    where
        I: IntoIterator<Item = BitVector>,
    {
        let mut s = Subspace::zero(ambient_dim);
        for g in gens {
            s.insert(g);
        }
        s
    }

    /// Adds a vector to the span, keeping the echelon form reduced.
    /// Returns `true` when the dimension grew.
    pub fn insert(&mut self, v: BitVector) -> bool {
        assert_eq!(
            v.len(),
            self.ambient_dim,
            "vector outside the ambient space"
        );
        let r = self.reduce(&v);
        let Some(p) = r.first_one() else {
            return false;
        };
        for b in &mut self.basis {
            if b.get(p) {
                b.xor_assign(&r);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.basis.insert(at, r);
        true
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BitVector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The canonical representative of `v` modulo this subspace: the result
    /// vanishes on every pivot column.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut r = v.clone();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if r.get(p) {
                r.xor_assign(b);
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        v.len() == self.ambient_dim && self.reduce(v).is_zero()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.ambient_dim == self.ambient_dim && other.basis.iter().all(|b| self.contains(b))
    }

    /// Coordinates of `v` in the echelon basis, or `None` when `v` lies
    /// outside the subspace.
    pub fn coordinates(&self, v: &BitVector) -> Option<BitVector> {
        if !self.contains(v) {
            return None;
        }
        Some(BitVector::from_bits(self.pivots.iter().map(|&p| v.get(p))))
    }

    /// The vector with the given coordinates in the echelon basis.
    pub fn combination(&self, coords: &BitVector) -> BitVector {
        assert_eq!(coords.len(), self.dim());
        let mut v = BitVector::zeros(self.ambient_dim);
        for i in coords.ones() {
            v.xor_assign(&self.basis[i]);
        }
        v
    }

    /// Every element of the subspace, in no particular order. Only sensible
    /// for small dimensions.
    pub fn elements(&self) -> Vec<BitVector> {
        assert!(self.dim() < 24, "refusing to enumerate a huge subspace");
        (0..1usize << self.dim())
            .map(|mask| {
                let mut v = BitVector::zeros(self.ambient_dim);
                for (i, b) in self.basis.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        v.xor_assign(b);
                    }
                }
                v
            })
            .collect()
    }

    fn check_same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let mut s = self.clone();
        for b in &other.basis {
            s.insert(b.clone());
        }
        Ok(s)
    }

    /// Intersection via the Zassenhaus construction.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let n = self.ambient_dim;
        let mut z = Subspace::zero(2 * n);
        for a in &self.basis {
            z.insert(a.concat(a));
        }
        for b in &other.basis {
            z.insert(b.concat(&BitVector::zeros(n)));
        }
        let gens = z
            .basis
            .iter()
            .zip(&z.pivots)
            .filter(|&(_, &p)| p >= n)
            .map(|(v, _)| v.slice(n, n));
        Ok(Subspace::from_generators(n, gens))
    }

    /// `dim self - dim sub`, after checking that `sub` is contained in `self`.
    pub fn quotient_dim(&self, sub: &Subspace) -> Result<usize> {
        self.check_same_ambient(sub)?;
        if !self.contains_subspace(sub) {
            return Err(Error::NotContained);
        }
        Ok(self.dim() - sub.dim())
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(ambient {}, basis {:?})",
            self.ambient_dim, self.basis
        )
    }
}

pub fn subspace_sum(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.sum(b)
}

pub fn subspace_intersection(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.intersection(b)
}

/// `{x : M x ∈ W}`.
pub fn preimage_subspace(m: &Gf2Matrix, w: &Subspace) -> Result<Subspace> {
    if w.ambient_dim() != m.rows() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: w.ambient_dim(),
        });
    }
    // x -> (M x mod W) is linear; its kernel is the preimage.
    let reduced: Vec<BitVector> = (0..m.cols()).map(|j| w.reduce(&m.column(j))).collect();
    Ok(Gf2Matrix::from_columns(m.rows(), &reduced).kernel())
}

pub fn quotient_dim(b: &Subspace, a: &Subspace) -> Result<usize> {
    b.quotient_dim(a)
}
