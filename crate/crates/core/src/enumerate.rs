//! Gray-code traversal of affine subspaces `offset + span(basis)`.
//!
//! Consecutive vectors differ by one basis row, so each step costs one XOR
//! and one popcount. The top bits of the coefficient vector select a chunk;
//! chunks are traversed independently and their histograms added.

use crate::exec::{map_chunks, Execution};
use crate::gf2::BitVector;

/// At most `2^CHUNK_BITS` independent chunks per traversal.
const CHUNK_BITS: usize = 10;

trait Word: Copy + Send + Sync + std::ops::BitXorAssign {
    fn popcount(self) -> u32;
}

impl Word for u64 {
    #[inline(always)]
    fn popcount(self) -> u32 {
        self.count_ones()
    }
}

impl Word for u128 {
    #[inline(always)]
    fn popcount(self) -> u32 {
        self.count_ones()
    }
}

/// Weight histogram (indices `0..=n`) of every vector in
/// `offset + span(basis)`, counting each coefficient vector once.
///
/// With independent basis rows this is the weight distribution of the
/// coset. `basis.len()` must stay below 64.
pub fn coset_histogram(offset: &BitVector, basis: &[BitVector], exec: Execution) -> Vec<u64> {
    let n = offset.len();
    assert!(basis.len() < 64, "traversal of 2^{} vectors", basis.len());
    assert!(basis.iter().all(|b| b.len() == n));
    if n <= 64 {
        let rows: Vec<u64> = basis.iter().map(|b| b.bits() as u64).collect();
        histogram_words(offset.bits() as u64, &rows, n, exec)
    } else {
        let rows: Vec<u128> = basis.iter().map(|b| b.bits()).collect();
        histogram_words(offset.bits(), &rows, n, exec)
    }
}

fn histogram_words<W: Word>(offset: W, rows: &[W], n: usize, exec: Execution) -> Vec<u64> {
    let k = rows.len();
    let top = k.min(CHUNK_BITS);
    let low = k - top;
    let (inner, outer) = rows.split_at(low);
    let parts = map_chunks(exec, 1usize << top, |chunk| {
        let mut start = offset;
        for (i, row) in outer.iter().enumerate() {
            if chunk >> i & 1 == 1 {
                start ^= *row;
            }
        }
        gray_walk(start, inner, n)
    });
    let mut hist = vec![0u64; n + 1];
    for part in parts {
        for (h, p) in hist.iter_mut().zip(part) {
            *h += p;
        }
    }
    hist
}

#[inline(never)]
fn gray_walk<W: Word>(start: W, rows: &[W], n: usize) -> Vec<u64> {
    let mut hist = vec![0u64; n + 1];
    let mut v = start;
    hist[v.popcount() as usize] += 1;
    let steps: u64 = 1 << rows.len();
    for i in 1..steps {
        v ^= rows[i.trailing_zeros() as usize];
        hist[v.popcount() as usize] += 1;
    }
    hist
}

/// Calls `visit` on every vector of `offset + span(basis)` in Gray order.
/// Sequential; meant for small spaces and test oracles.
pub fn for_each_in_coset(offset: &BitVector, basis: &[BitVector], mut visit: impl FnMut(&BitVector)) {
    assert!(basis.len() < 64);
    let mut v = *offset;
    visit(&v);
    for i in 1u64..1 << basis.len() {
        v ^= basis[i.trailing_zeros() as usize];
        visit(&v);
    }
}
