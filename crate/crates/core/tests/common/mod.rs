#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use selfdual::codes::small::i2_power;
use selfdual::equivalence::classify;
use selfdual::neighbors::{enumerate_self_dual_neighbors, neighbor};
use selfdual::wenum::{invariant_violations, shadow_distribution, weight_distribution};
use selfdual::{BitVector, LinearCode};

/// Random self-dual code of length `n`: a few random neighbor steps from
/// `i2^(n/2)` followed by a random coordinate permutation.
pub fn random_self_dual(n: usize, rng: &mut ChaCha8Rng) -> LinearCode {
    let mut c = i2_power(n / 2);
    for _ in 0..rng.gen_range(0..6) {
        let x = loop {
            let bits: u128 = rng.gen::<u128>() & ((1u128 << n) - 1);
            let x = BitVector::from_bits(n, bits);
            if x.weight() % 2 == 0 && !c.contains(&x) {
                break Some(x);
            }
            if n == 2 {
                break None;
            }
        };
        if let Some(x) = x {
            c = neighbor(&c, &x).unwrap();
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    c.permute(&perm)
}

/// `count` random self-dual codes with lengths cycling through 2, 4, …, 16.
pub fn random_self_dual_codes(count: usize, seed: u64) -> Vec<LinearCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|i| random_self_dual(2 * (i % 8 + 1), &mut rng)).collect()
}

pub fn histogram(c: &LinearCode) -> Vec<u64> {
    let mut h = vec![0u64; c.n() + 1];
    for w in c.codewords() {
        h[w.weight()] += 1;
    }
    h
}

/// Shadow by definition: vectors `v` with `v·c ≡ wt(c)/2 (mod 2)` for
/// every codeword `c`.
pub fn shadow_histogram(c: &LinearCode) -> Vec<u64> {
    let n = c.n();
    let words = c.codewords();
    let mut h = vec![0u64; n + 1];
    for bits in 0u128..(1 << n) {
        let v = BitVector::from_bits(n, bits);
        if words.iter().all(|w| v.dot(w) == ((w.weight() / 2) % 2 == 1)) {
            h[v.weight()] += 1;
        }
    }
    h
}

/// All distinct codes `⟨C ∩ x^⊥, x⟩` over even-weight `x ∉ C`.
pub fn neighbor_set(c: &LinearCode) -> BTreeSet<Vec<BitVector>> {
    let n = c.n();
    let mut out = BTreeSet::new();
    for bits in 0u128..(1 << n) {
        let x = BitVector::from_bits(n, bits);
        if x.weight() % 2 == 0 && !c.contains(&x) {
            out.insert(neighbor(c, &x).unwrap().rows().to_vec());
        }
    }
    out
}

/// Tries every coordinate permutation (Heap's algorithm).
pub fn equivalent_by_permutations(a: &LinearCode, b: &LinearCode) -> bool {
    if (a.n(), a.k()) != (b.n(), b.k()) {
        return false;
    }
    let n = a.n();
    let mut perm: Vec<usize> = (0..n).collect();
    let maps = |p: &[usize]| a.rows().iter().all(|r| b.contains(&r.permute(p)));
    if maps(&perm) {
        return true;
    }
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            if maps(&perm) {
                return true;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    false
}

/// Partition of `codes` (as sorted index lists) by exhaustive permutation
/// search.
pub fn partition_by_permutations(codes: &[LinearCode]) -> BTreeSet<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, c) in codes.iter().enumerate() {
        match classes.iter_mut().find(|k| equivalent_by_permutations(c, &codes[k[0]])) {
            Some(k) => k.push(i),
            None => classes.push(vec![i]),
        }
    }
    classes.into_iter().collect()
}

/// Outcome of a batch of oracle comparisons.
#[derive(Default, Debug)]
pub struct Tally {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn distribution_oracles(codes: &[LinearCode]) -> Tally {
    let mut t = Tally::default();
    for (i, c) in codes.iter().enumerate() {
        let w = weight_distribution(c).unwrap();
        t.check(w.counts() == histogram(c).as_slice(), || format!("code {i}: weight distribution"));
        if c.is_singly_even_self_dual() {
            let s = shadow_distribution(c).unwrap();
            t.check(s.counts() == shadow_histogram(c).as_slice(), || format!("code {i}: shadow"));
        }
    }
    t
}

pub fn neighbor_oracles(codes: &[LinearCode]) -> Tally {
    let mut t = Tally::default();
    for (i, c) in codes.iter().enumerate() {
        let listed = enumerate_self_dual_neighbors(c, |_| true).unwrap();
        let expected = 2 * ((1usize << (c.k() - 1)) - 1);
        t.check(listed.len() == expected, || format!("code {i}: {} neighbors, expected {expected}", listed.len()));
        let set: BTreeSet<Vec<BitVector>> = listed.iter().map(|x| x.rows().to_vec()).collect();
        t.check(set.len() == listed.len(), || format!("code {i}: duplicate neighbors"));
        t.check(set == neighbor_set(c), || format!("code {i}: neighbor set differs from brute force"));
    }
    t
}

/// Codes of length ≤ 10 mixing self-dual codes with random linear codes and
/// permuted copies, so that several classes occur.
pub fn classification_sample(seed: u64) -> Vec<LinearCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut base = Vec::new();
    for _ in 0..6 {
        let rows: Vec<BitVector> = (0..3).map(|_| BitVector::from_bits(8, rng.gen::<u128>() & 0xff)).collect();
        let c = LinearCode::from_rows(8, rows).unwrap();
        if c.k() == 3 {
            base.push(c);
        }
    }
    let mut sample = Vec::new();
    for c in &base {
        for _ in 0..3 {
            let mut perm: Vec<usize> = (0..8).collect();
            perm.shuffle(&mut rng);
            sample.push(c.permute(&perm));
        }
    }
    for _ in 0..6 {
        sample.push(random_self_dual(10, &mut rng));
    }
    sample
}

pub fn classify_oracle(seed: u64) -> Tally {
    let mut t = Tally::default();
    let sample = classification_sample(seed);
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, c) in sample.iter().enumerate() {
        match groups.iter_mut().find(|g| (sample[g[0]].n(), sample[g[0]].k()) == (c.n(), c.k())) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    for g in groups {
        let codes: Vec<LinearCode> = g.iter().map(|&i| sample[i].clone()).collect();
        let ours: BTreeSet<Vec<usize>> = classify(&codes)
            .unwrap()
            .into_iter()
            .map(|k| k.members.iter().map(|m| m.index).collect())
            .collect();
        let oracle = partition_by_permutations(&codes);
        t.check(ours == oracle, || format!("partition {ours:?} != {oracle:?}"));
    }
    t
}

pub fn invariant_oracles(codes: &[LinearCode]) -> Tally {
    let mut t = Tally::default();
    for (i, c) in codes.iter().enumerate() {
        let w = weight_distribution(c).unwrap();
        let s = c.is_singly_even_self_dual().then(|| shadow_distribution(c).unwrap());
        let v = invariant_violations(c, &w, s.as_ref());
        t.check(v.is_empty(), || format!("code {i}: {v:?}"));
        if c.n() > 2 {
            for (a, b) in [(0, 1), (0, c.n() - 1)] {
                if let Ok(sub) = c.subtract_coordinates(a, b) {
                    t.check(sub.is_self_dual(), || format!("code {i}: subtraction ({a},{b}) not self-dual"));
                }
            }
        }
    }
    t
}
