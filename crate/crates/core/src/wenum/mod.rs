//! Weight distributions of codes and shadows, minimum weight, MacWilliams
//! validation, and identification of extremal weight-enumerator families.

mod family;
mod info_sets;
mod macwilliams;

use std::fmt::Write as _;
use std::marker::PhantomData;

pub use family::{
    check_shadow_balance, classify_enumerator, extremal_min_weight, solve_shadow_balance,
    BalanceSolution, BalanceVerdict, Family, FamilyParams,
};
pub use info_sets::{low_weight_counts, low_weight_words, min_weight, min_weight_bound, InformationSets, MinWeightBound};
pub use macwilliams::{macwilliams_check, macwilliams_transform};

use crate::codes::LinearCode;
use crate::enumerate::coset_histogram;
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Largest dimension whose `2^k` codewords are enumerated exhaustively.
pub const ENUMERATION_LIMIT: usize = 34;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CodeWeights;
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ShadowWeights;

/// Exact counts `A_0..A_n` indexed by weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Distribution<K> {
    counts: Vec<u64>,
    _kind: PhantomData<K>,
}

/// `A_i`: number of codewords of weight `i`.
pub type WeightDistribution = Distribution<CodeWeights>;
/// `B_i`: number of shadow vectors of weight `i`.
pub type ShadowDistribution = Distribution<ShadowWeights>;

impl<K> Distribution<K> {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        assert!(!counts.is_empty(), "a distribution covers weights 0..=n");
        Self {
            counts,
            _kind: PhantomData,
        }
    }

    /// Zero counts for length `n`, with the listed `(weight, count)` set.
    pub fn from_entries(n: usize, entries: &[(usize, u64)]) -> Self {
        let mut counts = vec![0; n + 1];
        for &(w, c) in entries {
            counts[w] = c;
        }
        Self::from_counts(counts)
    }

    pub fn n(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Count at weight `i`; zero beyond the length.
    pub fn get(&self, i: usize) -> u64 {
        self.counts.get(i).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    /// Least nonzero weight `i ≥ 1` with a nonzero count.
    pub fn min_nonzero_weight(&self) -> Option<usize> {
        (1..self.counts.len()).find(|&i| self.counts[i] > 0)
    }

    /// Least weight `i ≥ 0` with a nonzero count.
    pub fn min_weight_present(&self) -> Option<usize> {
        (0..self.counts.len()).find(|&i| self.counts[i] > 0)
    }

    /// `A_i = A_{n-i}` for every `i`.
    pub fn is_symmetric(&self) -> bool {
        let n = self.n();
        (0..=n).all(|i| self.counts[i] == self.counts[n - i])
    }

    /// Nonzero counts only at weights `≡ residue (mod modulus)`.
    pub fn supported_on_residue(&self, residue: usize, modulus: usize) -> bool {
        self.counts
            .iter()
            .enumerate()
            .all(|(i, &c)| c == 0 || i % modulus == residue % modulus)
    }

    /// `weight,count` lines for the nonzero entries, with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("weight,count\n");
        for (i, &c) in self.counts.iter().enumerate() {
            if c != 0 {
                writeln!(out, "{i},{c}").unwrap();
            }
        }
        out
    }

    pub fn from_csv(n: usize, text: &str) -> Result<Self> {
        let mut counts = vec![0u64; n + 1];
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == "weight,count" => {}
            _ => return Err(Error::Parse("line 1: expected header `weight,count`".into())),
        }
        for (no, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parsed = line
                .split_once(',')
                .and_then(|(w, c)| Some((w.trim().parse::<usize>().ok()?, c.trim().parse::<u64>().ok()?)));
            match parsed {
                Some((w, c)) if w <= n => counts[w] = c,
                _ => return Err(Error::Parse(format!("line {}: bad entry {line:?}", no + 1))),
            }
        }
        Ok(Self::from_counts(counts))
    }
}

fn check_budget(k: usize) -> Result<()> {
    if k > ENUMERATION_LIMIT {
        Err(Error::Budget(format!(
            "exhaustive enumeration of 2^{k} vectors exceeds the limit of 2^{ENUMERATION_LIMIT}"
        )))
    } else {
        Ok(())
    }
}

/// Exact weight distribution by Gray-code enumeration of all codewords.
pub fn weight_distribution(c: &LinearCode) -> Result<WeightDistribution> {
    weight_distribution_with(c, Execution::default())
}

pub fn weight_distribution_with(c: &LinearCode, exec: Execution) -> Result<WeightDistribution> {
    check_budget(c.k())?;
    let zero = crate::gf2::BitVector::zeros(c.n());
    Ok(WeightDistribution::from_counts(coset_histogram(&zero, c.rows(), exec)))
}

/// Exact shadow distribution, streaming both cosets of the doubly-even
/// subcode.
pub fn shadow_distribution(c: &LinearCode) -> Result<ShadowDistribution> {
    shadow_distribution_with(c, Execution::default())
}

pub fn shadow_distribution_with(c: &LinearCode, exec: Execution) -> Result<ShadowDistribution> {
    check_budget(c.k())?;
    let parts = c.shadow_parts()?;
    let mut counts = vec![0u64; c.n() + 1];
    for rep in &parts.coset_reps {
        for (acc, x) in counts.iter_mut().zip(coset_histogram(rep, parts.c0.rows(), exec)) {
            *acc += x;
        }
    }
    Ok(ShadowDistribution::from_counts(counts))
}

/// Shadow vectors of weight `≤ max_weight`, counted by weight. The shadow
/// is the coset `u + C` for any shadow vector `u`.
pub fn shadow_low_weight_counts(c: &LinearCode, max_weight: usize) -> Result<Vec<u64>> {
    if !c.is_self_dual() {
        return Err(Error::Domain("shadow counts need a self-dual code".into()));
    }
    let parts = c.shadow_parts()?;
    low_weight_counts(c, Some(&parts.coset_reps[0]), max_weight)
}

/// Family parameters from the low-weight coefficients only. For the
/// registered lengths this reads the same coefficients as
/// [`classify_enumerator`] on the full distributions, at a fraction of the
/// cost.
pub fn family_params(c: &LinearCode) -> Result<FamilyParams> {
    let n = c.n();
    let d = min_weight(c)?;
    let top = (d + 2).min(n);
    let mut w = low_weight_counts(c, None, top)?;
    w.resize(n + 1, 0);
    let mut s = if c.is_singly_even_self_dual() {
        shadow_low_weight_counts(c, top)?
    } else {
        Vec::new()
    };
    s.resize(n + 1, 0);
    Ok(classify_enumerator(
        &WeightDistribution::from_counts(w),
        &ShadowDistribution::from_counts(s),
    ))
}

/// Checks the identities every self-dual code satisfies: the MacWilliams
/// fixed point, `A_i = A_{n-i}` (the all-one word is present), `A_i = 0`
/// for odd `i`, and, for singly even codes, shadow weights `≡ n/2 (mod 4)`.
/// Returns the failed checks by name.
pub fn invariant_violations(c: &LinearCode, w: &WeightDistribution, s: Option<&ShadowDistribution>) -> Vec<String> {
    let mut bad = Vec::new();
    if !c.is_self_dual() {
        bad.push("code is not self-dual".to_string());
    }
    if w.n() != c.n() || w.total() != 1u128 << c.k() {
        bad.push("distribution does not count 2^k words of length n".to_string());
    }
    if !macwilliams_check(w, c.k()) {
        bad.push("MacWilliams transform is not a fixed point".to_string());
    }
    if !w.is_symmetric() {
        bad.push("A_i != A_{n-i}".to_string());
    }
    if !w.supported_on_residue(0, 2) {
        bad.push("odd weight present".to_string());
    }
    if let Some(s) = s {
        if s.total() != 1u128 << c.k() {
            bad.push("shadow size is not 2^k".to_string());
        }
        if !s.supported_on_residue((c.n() / 2) % 4, 4) {
            bad.push(format!("shadow weight not congruent to {} mod 4", (c.n() / 2) % 4));
        }
    }
    bad
}
