//! Four-circulant codes: generator `(I_2n | [[A, B], [Bᵀ, Aᵀ]])` with
//! `n × n` circulants `A` and `B`, and the exhaustive normalized search
//! over their first rows.
//!
//! A circulant with first row `a` is the polynomial `a(x)` modulo
//! `x^n − 1`, and `AAᵀ` corresponds to `a(x)a(x⁻¹)`, whose coefficient at
//! `x^s` is the cyclic autocorrelation `Σ_i a_i a_{i+s}`. The code is
//! self-dual iff the autocorrelations of `a` and `b` add up to `δ_{s,0}`.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::exec::{map_chunks, Execution};
use crate::gf2::{BitMatrix, BitVector};
use crate::wenum::{InformationSets, MinWeightBound};

/// Largest block size accepted by the exhaustive search.
pub const SEARCH_BLOCK_LIMIT: usize = 16;

/// First rows of the two circulants of a four-circulant generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CirculantPair {
    pub ra: BitVector,
    pub rb: BitVector,
}

impl CirculantPair {
    pub fn new(ra: BitVector, rb: BitVector) -> Result<Self> {
        if ra.len() != rb.len() || ra.is_empty() {
            return Err(Error::Dimension(format!(
                "circulant rows of lengths {} and {}",
                ra.len(),
                rb.len()
            )));
        }
        if 4 * ra.len() > crate::gf2::MAX_LEN {
            return Err(Error::Dimension(format!("block {} gives length above 128", ra.len())));
        }
        Ok(Self { ra, rb })
    }

    pub fn block(&self) -> usize {
        self.ra.len()
    }

    pub fn weight_sum(&self) -> usize {
        self.ra.weight() + self.rb.weight()
    }

    /// Simultaneous cyclic shift of both rows.
    pub fn rotate(&self, s: usize) -> Self {
        Self {
            ra: self.ra.rotate_right(s),
            rb: self.rb.rotate_right(s),
        }
    }
}

impl fmt::Display for CirculantPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.ra, self.rb)
    }
}

impl FromStr for CirculantPair {
    type Err = Error;

    /// Parses `ra;rb` with both rows as `0/1` strings.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .trim()
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("expected `ra;rb`, got {s:?}")))?;
        CirculantPair::new(a.parse()?, b.parse()?)
    }
}

/// Reads a pair file: one `ra;rb` per line, blank lines ignored.
pub fn parse_pair_file(text: &str) -> Result<Vec<CirculantPair>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| l.parse().map_err(|e| Error::Parse(format!("line {}: {e}", i + 1))))
        .collect()
}

pub fn write_pair_file(pairs: &[CirculantPair]) -> String {
    pairs.iter().map(|p| format!("{p}\n")).collect()
}

/// Square circulant whose row `i + 1` is row `i` shifted right by one.
pub fn circulant_matrix(first_row: &BitVector) -> BitMatrix {
    let n = first_row.len();
    let rows = (0..n).map(|i| first_row.rotate_right(i)).collect();
    BitMatrix::from_rows(n, rows).expect("rows share the length")
}

/// The `[4n, 2n]` code generated by `(I_2n | [[A, B], [Bᵀ, Aᵀ]])`.
pub fn build_four_circulant(p: &CirculantPair) -> LinearCode {
    let n = p.block();
    let a = circulant_matrix(&p.ra);
    let b = circulant_matrix(&p.rb);
    let (at, bt) = (a.transpose(), b.transpose());
    let rows = (0..n)
        .map(|i| BitVector::concat(&[BitVector::unit(2 * n, i), *a.row(i), *b.row(i)]))
        .chain((0..n).map(|i| BitVector::concat(&[BitVector::unit(2 * n, n + i), *bt.row(i), *at.row(i)])))
        .collect();
    LinearCode::from_rows(4 * n, rows).expect("identity block keeps full rank")
}

/// Cyclic autocorrelation of an `n`-bit row: bit `s` is
/// `Σ_i a_i a_{i+s} (mod 2)`.
pub fn autocorrelation(bits: u64, n: usize) -> u64 {
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut out = 0u64;
    for s in 0..n {
        let rotated = if s == 0 { bits } else { ((bits << s) | (bits >> (n - s))) & mask };
        out |= (((bits & rotated).count_ones() & 1) as u64) << s;
    }
    out
}

/// `AAᵀ + BBᵀ = I`, evaluated through autocorrelations.
pub fn self_dual_condition(p: &CirculantPair) -> bool {
    let n = p.block();
    autocorrelation(p.ra.bits() as u64, n) ^ autocorrelation(p.rb.bits() as u64, n) == 1
}

/// Filters applied by [`FourCirculantSearch`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub block: usize,
    /// Minimum weight must be at least this.
    pub d_min: usize,
    /// When set, minimum weight must not exceed this.
    pub d_max: Option<usize>,
    /// Lower bound on `wt(ra) + wt(rb)`.
    pub weight_bound: usize,
    /// Required residue of `wt(ra) + wt(rb)` modulo 4.
    pub congruence: Option<usize>,
}

impl SearchConfig {
    /// Extremal `[60, 30, 12]` search: weight sum ≥ 13 and ≡ 1 (mod 4).
    pub fn extremal_60() -> Self {
        Self { block: 15, d_min: 12, d_max: None, weight_bound: 13, congruence: Some(1) }
    }

    /// `[60, 30, 10]` search: weight sum ≥ 9 and ≡ 1 (mod 4), `d` exactly 10.
    pub fn d10_60() -> Self {
        Self { block: 15, d_min: 10, d_max: Some(10), weight_bound: 9, congruence: Some(1) }
    }

    fn weights_ok(&self, sum: usize) -> bool {
        sum >= self.weight_bound && self.congruence.map_or(true, |r| sum % 4 == r % 4)
    }
}

/// Exhaustive search over pairs `(ra, rb)` with the last entry of `rb`
/// equal to 1. Pairs `rb` are bucketed by autocorrelation so that each
/// `ra` only meets the `rb` that complete the self-dual condition.
pub struct FourCirculantSearch {
    config: SearchConfig,
    partners: HashMap<u64, Vec<u64>>,
}

impl FourCirculantSearch {
    pub fn new(config: SearchConfig) -> Result<Self> {
        let n = config.block;
        if n == 0 || n > SEARCH_BLOCK_LIMIT {
            return Err(Error::Budget(format!(
                "block {n} outside 1..={SEARCH_BLOCK_LIMIT} (2^{} candidate pairs)",
                2 * n.max(1) - 1
            )));
        }
        let mut partners: HashMap<u64, Vec<u64>> = HashMap::new();
        let last = 1u64 << (n - 1);
        for b in (0..1u64 << n).filter(|b| b & last != 0) {
            partners.entry(autocorrelation(b, n)).or_default().push(b);
        }
        Ok(Self { config, partners })
    }

    pub fn config(&self) -> &SearchConfig {
        &self.config
    }

    /// Size of the `ra` space, `2^block`.
    pub fn ra_space(&self) -> u64 {
        1 << self.config.block
    }

    /// All accepted pairs with `ra` (as an integer, bit 0 = first entry)
    /// in `range`, sorted lexicographically by `(ra, rb)`.
    pub fn search_range(&self, range: Range<u64>, exec: Execution) -> Vec<CirculantPair> {
        let n = self.config.block;
        let len = range.end.saturating_sub(range.start);
        let chunks = len.min(256).max(1) as usize;
        let per = len.div_ceil(chunks as u64);
        let parts = map_chunks(exec, chunks, |c| {
            let lo = range.start + c as u64 * per;
            let hi = (lo + per).min(range.end);
            let mut found = Vec::new();
            for a in lo..hi {
                let Some(bs) = self.partners.get(&(autocorrelation(a, n) ^ 1)) else {
                    continue;
                };
                let wa = a.count_ones() as usize;
                for &b in bs {
                    if !self.config.weights_ok(wa + b.count_ones() as usize) {
                        continue;
                    }
                    let pair = CirculantPair {
                        ra: BitVector::from_bits(n, a as u128),
                        rb: BitVector::from_bits(n, b as u128),
                    };
                    if self.distance_ok(&pair) {
                        found.push(pair);
                    }
                }
            }
            found
        });
        let mut out: Vec<CirculantPair> = parts.into_iter().flatten().collect();
        out.sort();
        out
    }

    pub fn run(&self, exec: Execution) -> Vec<CirculantPair> {
        self.search_range(0..self.ra_space(), exec)
    }

    fn distance_ok(&self, pair: &CirculantPair) -> bool {
        let code = build_four_circulant(pair);
        let sets = InformationSets::new(&code);
        let Ok(low) = sets.min_weight_bound(Some(self.config.d_min)) else {
            return false;
        };
        if !low.meets(self.config.d_min) {
            return false;
        }
        match self.config.d_max {
            None => true,
            Some(max) => matches!(
                sets.min_weight_bound(Some(max + 1)),
                Ok(MinWeightBound::Below(_))
            ),
        }
    }
}

/// Key shared by pairs whose codes are equivalent for structural reasons:
/// independent cyclic shifts of `ra` and `rb`, swapping them, and applying
/// one multiplier `i -> u*i (mod n)` to both (`u = -1` is the transpose).
/// Each move is a row and column permutation of the generator, so pairs
/// with equal keys give equivalent codes. Unequal keys prove nothing.
pub fn orbit_key(p: &CirculantPair) -> (u128, u128) {
    let n = p.block();
    let (a, b) = (p.ra.bits(), p.rb.bits());
    (1..=n.max(1))
        .filter(|&u| gcd(u, n) == 1)
        .flat_map(|u| {
            let (x, y) = (min_rotation(multiply(a, u, n), n), min_rotation(multiply(b, u, n), n));
            [(x, y), (y, x)]
        })
        .min()
        .unwrap_or((a, b))
}

/// First pair (in the given order) of every [`orbit_key`] class.
pub fn orbit_representatives(pairs: &[CirculantPair]) -> Vec<CirculantPair> {
    let mut seen = std::collections::HashSet::new();
    pairs.iter().filter(|p| seen.insert(orbit_key(p))).copied().collect()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn multiply(bits: u128, u: usize, n: usize) -> u128 {
    (0..n).filter(|i| bits >> i & 1 == 1).fold(0, |acc, i| acc | 1 << (i * u % n))
}

fn min_rotation(bits: u128, n: usize) -> u128 {
    let v = BitVector::from_bits(n, bits);
    (0..n.max(1)).map(|s| v.rotate_right(s).bits()).min().unwrap_or(bits)
}

/// Runs the search described by `config` over the whole `ra` space.
pub fn search_four_circulant(config: SearchConfig) -> Result<Vec<CirculantPair>> {
    Ok(FourCirculantSearch::new(config)?.run(Execution::default()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wenum::min_weight;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn matrix_condition(p: &CirculantPair) -> bool {
        let a = circulant_matrix(&p.ra);
        let b = circulant_matrix(&p.rb);
        let aat = a.mul(&a.transpose()).unwrap();
        let bbt = b.mul(&b.transpose()).unwrap();
        let sum: Vec<BitVector> = aat.rows().iter().zip(bbt.rows()).map(|(x, y)| *x ^ *y).collect();
        BitMatrix::from_rows(p.block(), sum).unwrap() == BitMatrix::identity(p.block())
    }

    #[test]
    fn circulant_examples() {
        assert_eq!(circulant_matrix(&bv("100")), BitMatrix::identity(3));
        let all = circulant_matrix(&bv("111"));
        assert!(all.rows().iter().all(|r| r.weight() == 3));
        let c = circulant_matrix(&bv("1100"));
        assert_eq!(c.row(1).to_string(), "0110");
        assert_eq!(c.row(3).to_string(), "1001");
    }

    #[test]
    fn rotation_commutes_with_construction() {
        let row = bv("110100100");
        let m = circulant_matrix(&row);
        for s in 0..9 {
            let shifted = circulant_matrix(&row.rotate_right(s));
            for i in 0..9 {
                assert_eq!(*shifted.row(i), *m.row((i + s) % 9));
            }
        }
    }

    #[test]
    fn block_one_code() {
        let p = CirculantPair::new(bv("1"), bv("0")).unwrap();
        let c = build_four_circulant(&p);
        assert_eq!(c.serialized_rows(), vec!["1010", "0101"]);
        assert!(self_dual_condition(&p));
        assert!(c.is_self_dual());
    }

    #[test]
    fn identity_pair_is_self_dual() {
        let p = CirculantPair::new(BitVector::unit(7, 0), BitVector::zeros(7)).unwrap();
        assert!(self_dual_condition(&p));
    }

    #[test]
    fn polynomial_condition_matches_matrix_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let mut hits = 0;
        for _ in 0..10_000 {
            let p = CirculantPair::new(
                BitVector::from_bits(15, rng.gen()),
                BitVector::from_bits(15, rng.gen()),
            )
            .unwrap();
            let fast = self_dual_condition(&p);
            assert_eq!(fast, matrix_condition(&p));
            hits += fast as usize;
        }
        // force coverage of the positive case as well
        let mut positives = 0;
        for a in 0..1u128 << 6 {
            for b in 0..1u128 << 6 {
                let p = CirculantPair::new(BitVector::from_bits(6, a), BitVector::from_bits(6, b)).unwrap();
                let fast = self_dual_condition(&p);
                assert_eq!(fast, matrix_condition(&p));
                positives += fast as usize;
            }
        }
        assert!(positives > 0);
        let _ = hits;
    }

    #[test]
    fn condition_agrees_with_code_self_duality() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for block in 1..=8 {
            for _ in 0..200 {
                let p = CirculantPair::new(
                    BitVector::from_bits(block, rng.gen()),
                    BitVector::from_bits(block, rng.gen()),
                )
                .unwrap();
                assert_eq!(self_dual_condition(&p), build_four_circulant(&p).is_self_dual());
            }
        }
    }

    #[test]
    fn pair_text_format() {
        let p: CirculantPair = "101;001".parse().unwrap();
        assert_eq!(p.to_string(), "101;001");
        assert!("101;01".parse::<CirculantPair>().is_err());
        assert!("10101".parse::<CirculantPair>().is_err());
        let file = write_pair_file(&[p, p.rotate(1)]);
        assert_eq!(parse_pair_file(&file).unwrap(), vec![p, p.rotate(1)]);
        let err = parse_pair_file("101;001\n\nxx;11\n").unwrap_err();
        assert!(err.to_string().contains("line 3"));
    }

    #[test]
    fn search_budget() {
        let cfg = SearchConfig { block: 17, ..SearchConfig::extremal_60() };
        assert!(matches!(FourCirculantSearch::new(cfg), Err(Error::Budget(_))));
    }

    /// Unnormalized brute force over all pairs.
    fn brute_force(cfg: &SearchConfig) -> Vec<CirculantPair> {
        let n = cfg.block;
        let mut out = Vec::new();
        for a in 0..1u128 << n {
            for b in 0..1u128 << n {
                let p = CirculantPair::new(BitVector::from_bits(n, a), BitVector::from_bits(n, b)).unwrap();
                let code = build_four_circulant(&p);
                if !code.is_self_dual() || !cfg.weights_ok(p.weight_sum()) {
                    continue;
                }
                let d = min_weight(&code).unwrap();
                if d >= cfg.d_min && cfg.d_max.map_or(true, |m| d <= m) {
                    out.push(p);
                }
            }
        }
        out
    }

    #[test]
    fn search_matches_brute_force_up_to_shifts() {
        for (block, d_min, cong) in [(2, 2, None), (2, 4, None), (3, 2, Some(1)), (4, 2, Some(1)), (5, 4, Some(1)), (6, 4, Some(1))] {
            let cfg = SearchConfig { block, d_min, d_max: None, weight_bound: 0, congruence: cong };
            let found = search_four_circulant(cfg.clone()).unwrap();
            let brute = brute_force(&cfg);
            for p in &found {
                assert!(brute.contains(p));
                assert!(p.rb.get(block - 1));
            }
            for p in &brute {
                if p.rb.is_zero() {
                    continue;
                }
                assert!(
                    (0..block).any(|s| found.contains(&p.rotate(s))),
                    "{p} has no shifted representative"
                );
            }
            let mut sorted = found.clone();
            sorted.sort();
            assert_eq!(sorted, found);
        }
    }

    #[test]
    fn search_ranges_partition_the_space() {
        let cfg = SearchConfig { block: 7, d_min: 4, d_max: None, weight_bound: 0, congruence: Some(1) };
        let s = FourCirculantSearch::new(cfg).unwrap();
        let whole = s.run(Execution::Sequential);
        let mut pieces: Vec<CirculantPair> = [0..40, 40..41, 41..128]
            .into_iter()
            .flat_map(|r| s.search_range(r, Execution::Parallel))
            .collect();
        pieces.sort();
        assert_eq!(whole, pieces);
        assert!(!whole.is_empty());
    }

    #[test]
    fn orbit_moves_give_equivalent_codes() {
        use crate::equivalence::{are_equivalent, EquivalenceCertificate};
        let pairs = search_four_circulant(SearchConfig { block: 6, d_min: 4, d_max: None, weight_bound: 0, congruence: None }).unwrap();
        assert!(!pairs.is_empty());
        let reps = orbit_representatives(&pairs);
        assert!(reps.len() < pairs.len());
        for p in &pairs {
            let rep = reps.iter().find(|r| orbit_key(r) == orbit_key(p)).unwrap();
            let cert = are_equivalent(&build_four_circulant(p), &build_four_circulant(rep)).unwrap();
            assert!(matches!(cert, EquivalenceCertificate::Equivalent { .. }), "{p} vs {rep}");
        }
        let p = pairs[0];
        let n = p.block();
        let flip = |v: &BitVector| BitVector::from_bits(n, multiply(v.bits(), n - 1, n));
        let moved = CirculantPair { ra: flip(&p.rb).rotate_right(2), rb: flip(&p.ra) };
        assert_eq!(orbit_key(&moved), orbit_key(&CirculantPair { ra: p.ra, rb: p.rb.rotate_right(1) }));
    }
}
