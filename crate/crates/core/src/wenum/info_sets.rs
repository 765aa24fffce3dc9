//! Information-set methods: Brouwer–Zimmermann minimum weight and
//! low-weight enumeration through disjoint information sets.
//!
//! A codeword whose information vector on set `I_j` has weight `≤ w` is found
//! by enumerating `w`-subsets of the systematic rows for `I_j`. After level
//! `w` is finished on every set, any word not yet seen has weight at least
//! `w + 1 - (k - r_j)` on each `I_j` of rank `r_j`, and the sets are
//! disjoint, so those contributions add to a lower bound on its weight.

use crate::codes::LinearCode;
use crate::enumerate::{coset_histogram, for_each_in_coset};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::gf2::BitVector;

#[derive(Clone, Debug)]
struct Systematic {
    /// All `k` rows; the first `rank` are unit vectors on `columns`.
    rows: Vec<u128>,
    columns: Vec<usize>,
    mask: u128,
}

impl Systematic {
    fn rank(&self) -> usize {
        self.columns.len()
    }
}

/// Generator matrices of a code made systematic on pairwise disjoint
/// column sets, chosen greedily left to right.
#[derive(Clone, Debug)]
pub struct InformationSets {
    k: usize,
    sets: Vec<Systematic>,
}

impl InformationSets {
    pub fn new(c: &LinearCode) -> Self {
        let (n, k) = (c.n(), c.k());
        let mut used = vec![false; n];
        let mut sets = Vec::new();
        while k > 0 {
            let mut rows: Vec<u128> = c.rows().iter().map(|r| r.bits()).collect();
            let mut columns = Vec::new();
            for col in 0..n {
                if used[col] || columns.len() == k {
                    continue;
                }
                let rank = columns.len();
                let Some(found) = (rank..k).find(|&r| rows[r] >> col & 1 == 1) else {
                    continue;
                };
                rows.swap(rank, found);
                let pivot = rows[rank];
                for (r, row) in rows.iter_mut().enumerate() {
                    if r != rank && *row >> col & 1 == 1 {
                        *row ^= pivot;
                    }
                }
                columns.push(col);
            }
            if columns.is_empty() {
                break;
            }
            let mut mask = 0u128;
            for &col in &columns {
                used[col] = true;
                mask |= 1 << col;
            }
            sets.push(Systematic { rows, columns, mask });
        }
        Self { k, sets }
    }

    /// Number of information sets of full rank `k`.
    pub fn full_sets(&self) -> usize {
        self.sets.iter().filter(|s| s.rank() == self.k).count()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.sets.iter().map(|s| s.rank()).collect()
    }

    fn lower_bound(&self, level: usize, finished: usize) -> usize {
        self.sets
            .iter()
            .enumerate()
            .map(|(j, s)| {
                let reach = if j < finished { level + 1 } else { level };
                reach.saturating_sub(self.k - s.rank())
            })
            .sum()
    }

    /// Brouwer–Zimmermann search. With a target the search stops as soon as
    /// the answer relative to the target is known.
    pub fn min_weight_bound(&self, target: Option<usize>) -> Result<MinWeightBound> {
        if self.k == 0 {
            return Err(Error::Domain("the zero code has no minimum weight".into()));
        }
        let mut upper = usize::MAX;
        for level in 1..=self.k {
            for (j, set) in self.sets.iter().enumerate() {
                let best = min_combination_weight(&set.rows, level);
                upper = upper.min(best);
                if let Some(t) = target {
                    if upper < t {
                        return Ok(MinWeightBound::Below(upper));
                    }
                }
                let lower = if level == self.k {
                    upper
                } else {
                    self.lower_bound(level, j + 1)
                };
                if lower >= upper {
                    return Ok(MinWeightBound::Exact(upper));
                }
                if let Some(t) = target {
                    if lower >= t {
                        return Ok(MinWeightBound::AtLeast(lower));
                    }
                }
            }
        }
        Ok(MinWeightBound::Exact(upper))
    }

    /// Enumeration cost (vectors visited) of the information-set route for
    /// words of weight `≤ max_weight`, if at least one full set exists.
    fn route_cost(&self, max_weight: usize) -> Option<(usize, u128)> {
        let full = self.full_sets();
        if full == 0 {
            return None;
        }
        let per_set = (max_weight / full).min(self.k);
        let mut cost = 0u128;
        let mut binom = 1u128;
        for i in 0..=per_set {
            cost += binom;
            binom = binom * (self.k - i) as u128 / (i + 1) as u128;
        }
        Some((per_set, cost * full as u128))
    }

    /// Visits every vector of `offset + C` with weight `≤ max_weight`
    /// exactly once.
    fn visit_low_weight(&self, offset: &BitVector, max_weight: usize, mut visit: impl FnMut(u128)) {
        let (per_set, _) = self.route_cost(max_weight).expect("a full information set");
        let full: Vec<&Systematic> = self.sets.iter().filter(|s| s.rank() == self.k).collect();
        for (j, set) in full.iter().enumerate() {
            // Start from the coset vector that vanishes on this set.
            let mut base = offset.bits();
            for (r, &col) in set.columns.iter().enumerate() {
                if base >> col & 1 == 1 {
                    base ^= set.rows[r];
                }
            }
            let earlier: Vec<u128> = full[..j].iter().map(|s| s.mask).collect();
            let mut emit = |x: u128| {
                if (x.count_ones() as usize) <= max_weight
                    && earlier.iter().all(|m| (x & m).count_ones() as usize > per_set)
                {
                    visit(x);
                }
            };
            subsets_up_to(&set.rows, per_set, base, &mut emit);
        }
    }
}

/// Outcome of a minimum-weight search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinWeightBound {
    /// The exact minimum weight.
    Exact(usize),
    /// Certified lower bound that already meets the target.
    AtLeast(usize),
    /// A codeword of this weight exists and it is below the target.
    Below(usize),
}

impl MinWeightBound {
    /// True when the minimum weight is at least `target`.
    pub fn meets(&self, target: usize) -> bool {
        match *self {
            MinWeightBound::Exact(d) | MinWeightBound::AtLeast(d) => d >= target,
            MinWeightBound::Below(_) => false,
        }
    }
}

fn min_combination_weight(rows: &[u128], size: usize) -> usize {
    fn rec(rows: &[u128], size: usize, start: usize, acc: u128, best: &mut u32) {
        if size == 0 {
            *best = (*best).min(acc.count_ones());
            return;
        }
        for i in start..=rows.len() - size {
            rec(rows, size - 1, i + 1, acc ^ rows[i], best);
        }
    }
    let mut best = u32::MAX;
    if size <= rows.len() {
        rec(rows, size, 0, 0, &mut best);
    }
    best as usize
}

/// Calls `emit(base ^ xor of S)` for every subset `S` of `rows` with
/// `|S| ≤ max`.
fn subsets_up_to(rows: &[u128], max: usize, base: u128, emit: &mut impl FnMut(u128)) {
    fn rec(rows: &[u128], left: usize, start: usize, acc: u128, emit: &mut impl FnMut(u128)) {
        emit(acc);
        if left == 0 {
            return;
        }
        for i in start..rows.len() {
            rec(rows, left - 1, i + 1, acc ^ rows[i], emit);
        }
    }
    rec(rows, max, 0, base, emit);
}

/// Exact minimum nonzero weight.
pub fn min_weight(c: &LinearCode) -> Result<usize> {
    match InformationSets::new(c).min_weight_bound(None)? {
        MinWeightBound::Exact(d) => Ok(d),
        other => Err(Error::Internal(format!("untargeted search returned {other:?}"))),
    }
}

/// Minimum-weight search with an optional early-exit target.
pub fn min_weight_bound(c: &LinearCode, target: Option<usize>) -> Result<MinWeightBound> {
    InformationSets::new(c).min_weight_bound(target)
}

/// Counts of vectors of weight `0..=max_weight` in `offset + C` (the code
/// itself when `offset` is `None`).
pub fn low_weight_counts(c: &LinearCode, offset: Option<&BitVector>, max_weight: usize) -> Result<Vec<u64>> {
    let zero = BitVector::zeros(c.n());
    let offset = offset.unwrap_or(&zero);
    let max_weight = max_weight.min(c.n());
    let sets = InformationSets::new(c);
    let mut counts = vec![0u64; max_weight + 1];
    match sets.route_cost(max_weight) {
        Some((_, cost)) if c.k() > super::ENUMERATION_LIMIT || cost < 1u128 << c.k() => {
            sets.visit_low_weight(offset, max_weight, |x| counts[x.count_ones() as usize] += 1);
        }
        _ => {
            super::check_budget(c.k())?;
            let hist = coset_histogram(offset, c.rows(), Execution::default());
            counts.copy_from_slice(&hist[..=max_weight]);
        }
    }
    Ok(counts)
}

/// All nonzero codewords of weight `≤ max_weight`, sorted.
pub fn low_weight_words(c: &LinearCode, max_weight: usize) -> Result<Vec<BitVector>> {
    let n = c.n();
    let sets = InformationSets::new(c);
    let mut out = Vec::new();
    match sets.route_cost(max_weight) {
        Some((_, cost)) if c.k() > super::ENUMERATION_LIMIT || cost < 1u128 << c.k() => {
            sets.visit_low_weight(&BitVector::zeros(n), max_weight, |x| {
                if x != 0 {
                    out.push(BitVector::from_bits(n, x));
                }
            });
        }
        _ => {
            super::check_budget(c.k())?;
            for_each_in_coset(&BitVector::zeros(n), c.rows(), |v| {
                if !v.is_zero() && v.weight() <= max_weight {
                    out.push(*v);
                }
            });
        }
    }
    out.sort();
    Ok(out)
}
