//! Bit-packed vectors and matrices over GF(2).
//!
//! A [`BitVector`] holds up to [`MAX_LEN`] coordinates in a single `u128`.
//! Coordinate `i` (0-based) lives in bit `i`, so the first coordinate is the
//! least significant bit. The textual form is a string of `0`/`1` characters
//! whose leftmost character is the first coordinate.
//!
//! Indices taken and returned by methods on these types are 0-based. The
//! `*_coords` helpers convert to and from the 1-based coordinate sets used in
//! files and on the command line.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitXor, BitXorAssign};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported vector length.
pub const MAX_LEN: usize = 128;

#[inline]
fn mask(len: usize) -> u128 {
    if len == MAX_LEN {
        u128::MAX
    } else {
        (1u128 << len) - 1
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    bits: u128,
    len: u8,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        assert!(len <= MAX_LEN, "vector length {len} exceeds {MAX_LEN}");
        Self { bits: 0, len: len as u8 }
    }

    pub fn ones(len: usize) -> Self {
        Self::from_bits(len, u128::MAX)
    }

    /// Builds a vector from raw bits; bits at positions `>= len` are dropped.
    pub fn from_bits(len: usize, bits: u128) -> Self {
        assert!(len <= MAX_LEN, "vector length {len} exceeds {MAX_LEN}");
        Self {
            bits: bits & mask(len),
            len: len as u8,
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    /// Builds a vector from a set of 1-based coordinates.
    pub fn from_coords(len: usize, coords: &[usize]) -> Result<Self> {
        if len > MAX_LEN {
            return Err(Error::Argument(format!("length {len} exceeds {MAX_LEN}")));
        }
        let mut v = Self::zeros(len);
        for &c in coords {
            if c == 0 || c > len {
                return Err(Error::Argument(format!(
                    "coordinate {c} outside 1..={len}"
                )));
            }
            if v.get(c - 1) {
                return Err(Error::Argument(format!("coordinate {c} repeated")));
            }
            v.set(c - 1, true);
        }
        Ok(v)
    }

    /// Sorted 1-based coordinates of the support.
    pub fn coords(&self) -> Vec<usize> {
        self.support().map(|i| i + 1).collect()
    }

    /// 0-based positions of the set coordinates, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> {
        let mut rest = self.bits;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    #[inline]
    pub fn bits(&self) -> u128 {
        self.bits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len());
        (self.bits >> i) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len(), "index {i} out of range for length {}", self.len);
        if value {
            self.bits |= 1 << i;
        } else {
            self.bits &= !(1 << i);
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len(), "index {i} out of range for length {}", self.len);
        self.bits ^= 1 << i;
    }

    #[inline]
    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// Standard inner product over GF(2).
    #[inline]
    pub fn dot(&self, other: &Self) -> bool {
        (self.bits & other.bits).count_ones() & 1 == 1
    }

    /// Cyclic shift moving coordinate `i` to `i + s (mod len)`.
    pub fn rotate_right(&self, s: usize) -> Self {
        let n = self.len();
        if n == 0 {
            return *self;
        }
        let s = s % n;
        if s == 0 {
            return *self;
        }
        let m = mask(n);
        let bits = ((self.bits << s) & m) | (self.bits >> (n - s));
        Self::from_bits(n, bits)
    }

    /// Concatenates vectors, first argument first.
    pub fn concat(parts: &[BitVector]) -> Self {
        let len: usize = parts.iter().map(|p| p.len()).sum();
        assert!(len <= MAX_LEN, "concatenated length {len} exceeds {MAX_LEN}");
        let mut bits = 0u128;
        let mut offset = 0;
        for p in parts {
            if offset < MAX_LEN {
                bits |= p.bits << offset;
            }
            offset += p.len();
        }
        Self::from_bits(len, bits)
    }

    /// The sub-vector of coordinates `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> Self {
        assert!(start + len <= self.len());
        Self::from_bits(len, self.bits >> start)
    }

    /// Drops the listed 0-based positions, keeping the remaining order.
    pub fn delete(&self, positions: &[usize]) -> Self {
        let mut out = Self::zeros(self.len() - positions.len());
        let mut j = 0;
        for i in 0..self.len() {
            if positions.contains(&i) {
                continue;
            }
            if self.get(i) {
                out.set(j, true);
            }
            j += 1;
        }
        out
    }

    /// Applies a coordinate map: coordinate `i` of `self` lands on `image[i]`.
    pub fn permute(&self, image: &[usize]) -> Self {
        debug_assert_eq!(image.len(), self.len());
        let mut bits = 0u128;
        for i in self.support() {
            bits |= 1 << image[i];
        }
        Self::from_bits(self.len(), bits)
    }
}

impl Ord for BitVector {
    /// Lexicographic order of the textual form (`'0' < '1'`, first
    /// coordinate most significant), with shorter vectors first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            let diff = self.bits ^ other.bits;
            if diff == 0 {
                Ordering::Equal
            } else if (self.bits >> diff.trailing_zeros()) & 1 == 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl BitXor for BitVector {
    type Output = Self;
    #[inline]
    fn bitxor(self, rhs: Self) -> Self {
        debug_assert_eq!(self.len, rhs.len);
        Self {
            bits: self.bits ^ rhs.bits,
            len: self.len,
        }
    }
}

impl BitXorAssign for BitVector {
    #[inline]
    fn bitxor_assign(&mut self, rhs: Self) {
        debug_assert_eq!(self.len, rhs.len);
        self.bits ^= rhs.bits;
    }
}

impl BitAnd for BitVector {
    type Output = Self;
    #[inline]
    fn bitand(self, rhs: Self) -> Self {
        debug_assert_eq!(self.len, rhs.len);
        Self {
            bits: self.bits & rhs.bits,
            len: self.len,
        }
    }
}

impl BitAndAssign for BitVector {
    #[inline]
    fn bitand_assign(&mut self, rhs: Self) {
        self.bits &= rhs.bits;
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len())
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() > MAX_LEN {
            return Err(Error::Parse(format!(
                "vector of length {} exceeds {MAX_LEN}",
                s.len()
            )));
        }
        let mut v = BitVector::zeros(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => v.set(i, true),
                other => {
                    return Err(Error::Parse(format!(
                        "unexpected character {other:?} at position {}",
                        i + 1
                    )))
                }
            }
        }
        Ok(v)
    }
}

/// A dense matrix over GF(2) stored as a list of rows.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

/// Reduced row echelon form of a matrix.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Nonzero rows of the reduced form; row `i` has its leading one in
    /// column `pivots[i]`.
    pub reduced: BitMatrix,
    /// 0-based pivot columns, strictly increasing.
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the row space: the result has a zero in every
    /// pivot column and differs from `v` by a row-space element.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut r = *v;
        for (row, &p) in self.reduced.rows.iter().zip(&self.pivots) {
            if r.get(p) {
                r ^= *row;
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }
}

impl BitMatrix {
    pub fn new(cols: usize) -> Self {
        assert!(cols <= MAX_LEN);
        Self {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if cols > MAX_LEN {
            return Err(Error::Dimension(format!("{cols} columns exceed {MAX_LEN}")));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Dimension(format!(
                "row of length {} in a matrix with {cols} columns",
                bad.len()
            )));
        }
        Ok(Self { cols, rows })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
        }
    }

    pub fn push(&mut self, row: BitVector) {
        assert_eq!(row.len(), self.cols, "row length must equal column count");
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn transpose(&self) -> Self {
        let mut out: Vec<BitVector> = (0..self.cols)
            .map(|_| BitVector::zeros(self.rows.len()))
            .collect();
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.support() {
                out[c].set(r, true);
            }
        }
        Self {
            cols: self.rows.len(),
            rows: out,
        }
    }

    /// `self · vᵀ`, one output bit per row.
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            if row.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.nrows() {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.cols,
                other.nrows(),
                other.cols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVector::zeros(other.cols);
                for i in row.support() {
                    acc ^= other.rows[i];
                }
                acc
            })
            .collect();
        Ok(BitMatrix {
            cols: other.cols,
            rows,
        })
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "cannot stack matrices with {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut rows = self.rows.clone();
        rows.extend_from_slice(&other.rows);
        Ok(BitMatrix {
            cols: self.cols,
            rows,
        })
    }

    /// Reduced row echelon form. Pivots are taken in increasing column order,
    /// so the result depends only on the row space.
    pub fn rref(&self) -> Echelon {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == rows.len() {
                break;
            }
            let Some(found) = (rank..rows.len()).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(rank, found);
            let pivot = rows[rank];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(c) {
                    *row ^= pivot;
                }
            }
            pivots.push(c);
            rank += 1;
        }
        rows.truncate(rank);
        Echelon {
            reduced: BitMatrix {
                cols: self.cols,
                rows,
            },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Basis of the right null space `{v : self · vᵀ = 0}`.
    pub fn kernel(&self) -> BitMatrix {
        let ech = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let mut out = BitMatrix::new(self.cols);
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVector::unit(self.cols, free);
            for (row, &p) in ech.reduced.rows.iter().zip(&ech.pivots) {
                if row.get(free) {
                    v.set(p, true);
                }
            }
            out.rows.push(v);
        }
        out
    }

    /// Basis (in reduced echelon form) of `rowspace(a) ∩ rowspace(b)`.
    pub fn intersect(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix> {
        if a.cols != b.cols {
            return Err(Error::Dimension(format!(
                "cannot intersect spaces of length {} and {}",
                a.cols, b.cols
            )));
        }
        // (A⊥ + B⊥)⊥ = A ∩ B
        let perp = a.kernel().stack(&b.kernel())?;
        Ok(perp.kernel().rref().reduced)
    }

    /// True when both matrices span the same row space.
    pub fn same_row_space(&self, other: &BitMatrix) -> bool {
        self.cols == other.cols && self.rref().reduced == other.rref().reduced
    }
}
