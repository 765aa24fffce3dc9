//! Binary linear codes and the structure of self-dual codes: duals, the
//! doubly-even subcode, the shadow, and coordinate subtraction.

use serde::{Deserialize, Serialize};

use crate::enumerate::for_each_in_coset;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, Echelon, MAX_LEN};

/// A binary linear `[n, k]` code. The generator is kept in reduced row
/// echelon form, so two codes are equal exactly when their row spaces are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearCode {
    n: usize,
    gen: BitMatrix,
    pivots: Vec<usize>,
}

/// Weight behaviour of a code's codewords.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityClass {
    /// Every weight divisible by 4.
    DoublyEven,
    /// All weights even, some weight ≡ 2 (mod 4).
    SinglyEven,
    /// Contains an odd-weight codeword.
    OddContaining,
}

impl LinearCode {
    /// The span of `rows`. An empty list gives the zero code.
    pub fn from_rows(n: usize, rows: Vec<BitVector>) -> Result<Self> {
        if n == 0 || n > MAX_LEN {
            return Err(Error::Dimension(format!("code length {n} outside 1..={MAX_LEN}")));
        }
        let m = BitMatrix::from_rows(n, rows)?;
        Ok(Self::from_echelon(m.rref()))
    }

    pub fn from_matrix(m: &BitMatrix) -> Result<Self> {
        Self::from_rows(m.ncols(), m.rows().to_vec())
    }

    fn from_echelon(e: Echelon) -> Self {
        Self {
            n: e.reduced.ncols(),
            gen: e.reduced,
            pivots: e.pivots,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.gen.nrows()
    }

    /// Reduced echelon generator matrix.
    pub fn generator(&self) -> &BitMatrix {
        &self.gen
    }

    pub fn rows(&self) -> &[BitVector] {
        self.gen.rows()
    }

    /// Pivot column of each generator row (0-based). These form an
    /// information set.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn echelon(&self) -> Echelon {
        Echelon {
            reduced: self.gen.clone(),
            pivots: self.pivots.clone(),
        }
    }

    /// The unique coset element with zeros in every pivot column, which is
    /// also the lexicographically smallest vector of `v + C`.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut r = *v;
        for (row, &p) in self.gen.rows().iter().zip(&self.pivots) {
            if r.get(p) {
                r ^= *row;
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        v.len() == self.n && self.reduce(v).is_zero()
    }

    /// Codeword with information vector `info` (bit `i` selects row `i`).
    pub fn encode(&self, info: u64) -> BitVector {
        let mut acc = BitVector::zeros(self.n);
        for (i, row) in self.gen.rows().iter().enumerate() {
            if info >> i & 1 == 1 {
                acc ^= *row;
            }
        }
        acc
    }

    /// Every codeword, in Gray order. Intended for small codes.
    pub fn codewords(&self) -> Vec<BitVector> {
        assert!(self.k() <= 26, "refusing to list 2^{} codewords", self.k());
        let mut out = Vec::with_capacity(1 << self.k());
        for_each_in_coset(&BitVector::zeros(self.n), self.rows(), |v| out.push(*v));
        out
    }

    pub fn dual(&self) -> LinearCode {
        let ker = self.gen.kernel();
        Self::from_echelon(ker.rref())
    }

    /// True when every pair of generator rows (including a row with itself)
    /// is orthogonal.
    pub fn is_self_orthogonal(&self) -> bool {
        let rows = self.rows();
        rows.iter()
            .enumerate()
            .all(|(i, a)| rows[i..].iter().all(|b| !a.dot(b)))
    }

    pub fn is_self_dual(&self) -> bool {
        2 * self.k() == self.n && self.is_self_orthogonal()
    }

    /// Classifies codeword weights from the generator rows alone: a code
    /// is doubly even iff every row has weight ≡ 0 (mod 4) and every pair
    /// of rows meets evenly, since `wt(a+b) = wt(a) + wt(b) - 2|a∩b|`.
    pub fn parity_class(&self) -> ParityClass {
        let rows = self.rows();
        if rows.iter().any(|r| r.weight() % 2 == 1) {
            return ParityClass::OddContaining;
        }
        let doubly = rows.iter().all(|r| r.weight() % 4 == 0)
            && rows
                .iter()
                .enumerate()
                .all(|(i, a)| rows[i + 1..].iter().all(|b| !a.dot(b)));
        if doubly {
            ParityClass::DoublyEven
        } else {
            ParityClass::SinglyEven
        }
    }

    pub fn is_singly_even_self_dual(&self) -> bool {
        self.is_self_dual() && self.parity_class() == ParityClass::SinglyEven
    }

    /// Applies a coordinate map to every codeword (coordinate `i` moves to
    /// `image[i]`).
    pub fn permute(&self, image: &[usize]) -> LinearCode {
        assert_eq!(image.len(), self.n);
        let rows = self.rows().iter().map(|r| r.permute(image)).collect();
        Self::from_rows(self.n, rows).expect("permutation preserves length")
    }

    /// Generator rows as `0/1` strings, the order used to pick class
    /// representatives.
    pub fn serialized_rows(&self) -> Vec<String> {
        self.rows().iter().map(|r| r.to_string()).collect()
    }

    /// Splits a singly even self-dual code into its doubly-even subcode and
    /// the two cosets of that subcode that make up the shadow.
    pub fn shadow_parts(&self) -> Result<ShadowParts> {
        if !self.is_self_dual() {
            return Err(Error::Domain("shadow requires a self-dual code".into()));
        }
        if self.parity_class() != ParityClass::SinglyEven {
            return Err(Error::Domain(
                "shadow requires a singly even code (doubly-even codes have C0 = C)".into(),
            ));
        }
        // wt(c)/2 mod 2 is linear on a self-orthogonal even code; C0 is its kernel.
        let rows = self.rows();
        let half_parity = |r: &BitVector| (r.weight() / 2) % 2 == 1;
        let odd_idx = rows.iter().position(half_parity).expect("singly even");
        let pivot_row = rows[odd_idx];
        let c0_rows: Vec<BitVector> = rows
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != odd_idx)
            .map(|(_, r)| if half_parity(r) { *r ^ pivot_row } else { *r })
            .collect();
        let c0 = LinearCode::from_rows(self.n, c0_rows)?;
        let c0_dual = c0.dual();
        let u = c0_dual
            .rows()
            .iter()
            .find(|v| !self.contains(v))
            .copied()
            .ok_or_else(|| Error::Internal("C0 dual equals C".into()))?;
        let mut reps = [c0.reduce(&u), c0.reduce(&(u ^ pivot_row))];
        reps.sort();
        Ok(ShadowParts {
            c0,
            coset_reps: reps,
        })
    }

    /// Keeps the codewords with equal entries at positions `i` and `j`
    /// (0-based) and deletes both positions. For a self-dual `[n, n/2]` code
    /// without weight-2 words this yields a self-dual `[n-2, n/2-1]` code.
    pub fn subtract_coordinates(&self, i: usize, j: usize) -> Result<LinearCode> {
        if i == j {
            return Err(Error::Argument("subtraction needs two distinct coordinates".into()));
        }
        if i >= self.n || j >= self.n {
            return Err(Error::Argument(format!(
                "coordinates {} and {} not both in 1..={}",
                i + 1,
                j + 1,
                self.n
            )));
        }
        if self.n <= 2 {
            return Err(Error::Argument("subtraction needs length at least 4".into()));
        }
        if !self.is_self_dual() {
            return Err(Error::Domain("subtraction requires a self-dual code".into()));
        }
        let differs = |r: &BitVector| r.get(i) != r.get(j);
        let rows = self.rows();
        let sub: Vec<BitVector> = match rows.iter().position(differs) {
            Some(p) => rows
                .iter()
                .enumerate()
                .filter(|&(t, _)| t != p)
                .map(|(_, r)| if differs(r) { *r ^ rows[p] } else { *r })
                .collect(),
            None => rows.to_vec(),
        };
        let (lo, hi) = (i.min(j), i.max(j));
        let shortened: Vec<BitVector> = sub.iter().map(|r| r.delete(&[lo, hi])).collect();
        let out = LinearCode::from_rows(self.n - 2, shortened)?;
        if out.k() != self.n / 2 - 1 || !out.is_self_dual() {
            return Err(Error::Internal(format!(
                "subtracting ({}, {}) gave a non-self-dual [{}, {}] code",
                i + 1,
                j + 1,
                out.n(),
                out.k()
            )));
        }
        Ok(out)
    }

    /// Direct sum: codewords of `self` followed by codewords of `other`.
    pub fn direct_sum(&self, other: &LinearCode) -> Result<LinearCode> {
        let n = self.n + other.n;
        if n > MAX_LEN {
            return Err(Error::Dimension(format!("direct sum length {n} exceeds {MAX_LEN}")));
        }
        let zl = BitVector::zeros(self.n);
        let zr = BitVector::zeros(other.n);
        let rows = self
            .rows()
            .iter()
            .map(|r| BitVector::concat(&[*r, zr]))
            .chain(other.rows().iter().map(|r| BitVector::concat(&[zl, *r])))
            .collect();
        LinearCode::from_rows(n, rows)
    }
}

/// The doubly-even subcode `C0` of a singly even self-dual code together
/// with representatives of the two cosets of `C0` forming the shadow
/// `C0⊥ \ C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShadowParts {
    pub c0: LinearCode,
    /// Lexicographically smallest vector of each shadow coset, ascending.
    pub coset_reps: [BitVector; 2],
}

impl ShadowParts {
    /// True when `v` lies in the shadow.
    pub fn contains(&self, v: &BitVector) -> bool {
        let r = self.c0.reduce(v);
        self.coset_reps.contains(&r)
    }
}

/// On-disk code description: `{"name", "n", "k", "rows"}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CodeFile {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub rows: Vec<String>,
}

impl CodeFile {
    pub fn from_code(name: &str, code: &LinearCode) -> Self {
        CodeFile {
            name: name.to_string(),
            n: code.n(),
            k: code.k(),
            rows: code.serialized_rows(),
        }
    }

    /// Parses and normalizes the rows; the declared `n` and `k` must match.
    pub fn to_code(&self) -> Result<LinearCode> {
        let mut rows = Vec::with_capacity(self.rows.len());
        for (i, s) in self.rows.iter().enumerate() {
            let v: BitVector = s
                .parse()
                .map_err(|e| Error::Parse(format!("row {}: {e}", i + 1)))?;
            if v.len() != self.n {
                return Err(Error::Parse(format!(
                    "row {} has length {}, expected {}",
                    i + 1,
                    v.len(),
                    self.n
                )));
            }
            rows.push(v);
        }
        let code = LinearCode::from_rows(self.n, rows)?;
        if code.k() != self.k {
            return Err(Error::Parse(format!(
                "rows span dimension {}, file declares k = {}",
                code.k(),
                self.k
            )));
        }
        Ok(code)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// Small textbook codes used as building blocks.
pub mod small {
    use super::*;

    /// The `[2, 1, 2]` code `{00, 11}`.
    pub fn i2() -> LinearCode {
        LinearCode::from_rows(2, vec!["11".parse().unwrap()]).unwrap()
    }

    /// Direct sum of `m` copies of `{00, 11}`.
    pub fn i2_power(m: usize) -> LinearCode {
        let rows = (0..m)
            .map(|i| BitVector::from_bits(2 * m, 0b11 << (2 * i)))
            .collect();
        LinearCode::from_rows(2 * m, rows).unwrap()
    }

    /// Extended Hamming `[8, 4, 4]` code.
    pub fn e8() -> LinearCode {
        let rows = ["11110000", "00111100", "00001111", "01010101"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        LinearCode::from_rows(8, rows).unwrap()
    }

    /// The singly even self-dual `[12, 6, 4]` code.
    pub fn b12() -> LinearCode {
        let rows = [
            "111100000000",
            "001111000000",
            "000011110000",
            "000000111100",
            "000000001111",
            "010101010101",
        ]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
        LinearCode::from_rows(12, rows).unwrap()
    }
}
