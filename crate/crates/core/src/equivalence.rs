//! Permutation equivalence of binary codes.
//!
//! Codes are compared first through a permutation-invariant
//! [`InvariantSignature`]. When signatures agree, a backtracking search
//! looks for a coordinate map between the incidence structures formed by
//! the lowest-weight codewords (the smallest weight class that spans the
//! code). Both structures are refined in lockstep: every vertex (coordinate
//! or codeword) is recoloured by its own colour and the multiset of its
//! neighbours' colours until the partition is stable. One coordinate is
//! then individualized on the first side and matched against every
//! candidate of the same colour on the second side. Any equivalence maps
//! low-weight words onto low-weight words, so the search is complete; every
//! permutation it returns is checked against the generator rows before it
//! is reported.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::exec::{map_chunks, Execution};
use crate::gf2::{BitMatrix, BitVector};
use crate::wenum::{low_weight_counts, low_weight_words, min_weight};

/// Number of weights past the minimum covered by the distribution prefixes.
const PREFIX_SPAN: usize = 4;

/// Cap on the codewords used as incidence blocks.
const MAX_BLOCKS: usize = 60_000;

/// Permutation-invariant summary of a code.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InvariantSignature {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// `A_d..=A_{d+4}`.
    pub weight_prefix: Vec<u64>,
    /// `B_0..=B_{d+4}` of the shadow, for singly even self-dual codes.
    pub shadow_prefix: Option<Vec<u64>>,
    /// Sorted number of minimum-weight words through each coordinate.
    pub coordinate_degrees: Vec<u32>,
    /// Sorted number of minimum-weight words through each coordinate pair.
    pub cooccurrence: Vec<u32>,
}

impl InvariantSignature {
    /// Name of the first field in which `self` and `other` differ.
    pub fn first_difference(&self, other: &Self) -> Option<&'static str> {
        if self.n != other.n {
            Some("length")
        } else if self.k != other.k {
            Some("dimension")
        } else if self.d != other.d {
            Some("minimum weight")
        } else if self.weight_prefix != other.weight_prefix {
            Some("weight distribution prefix")
        } else if self.shadow_prefix != other.shadow_prefix {
            Some("shadow distribution prefix")
        } else if self.coordinate_degrees != other.coordinate_degrees {
            Some("coordinate degrees in minimum-weight words")
        } else if self.cooccurrence != other.cooccurrence {
            Some("pair co-occurrence in minimum-weight words")
        } else {
            None
        }
    }
}

/// Computes the invariant signature of a nonzero code.
pub fn signature(c: &LinearCode) -> Result<InvariantSignature> {
    let d = min_weight(c)?;
    let top = (d + PREFIX_SPAN).min(c.n());
    let weight_prefix = low_weight_counts(c, None, top)?[d..].to_vec();
    let shadow_prefix = if c.is_singly_even_self_dual() {
        // The shadow is a single coset u + C of the code.
        let parts = c.shadow_parts()?;
        Some(low_weight_counts(c, Some(&parts.coset_reps[0]), top)?)
    } else {
        None
    };
    let words: Vec<BitVector> = low_weight_words(c, d)?
        .into_iter()
        .filter(|w| w.weight() == d)
        .collect();
    let n = c.n();
    let mut degrees = vec![0u32; n];
    let mut pairs = vec![0u32; n * n];
    for w in &words {
        let support: Vec<usize> = w.support().collect();
        for (x, &i) in support.iter().enumerate() {
            degrees[i] += 1;
            for &j in &support[x + 1..] {
                pairs[i * n + j] += 1;
            }
        }
    }
    let mut cooccurrence: Vec<u32> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .map(|(i, j)| pairs[i * n + j])
        .collect();
    degrees.sort_unstable();
    cooccurrence.sort_unstable();
    Ok(InvariantSignature {
        n,
        k: c.k(),
        d,
        weight_prefix,
        shadow_prefix,
        coordinate_degrees: degrees,
        cooccurrence,
    })
}

/// Outcome of an equivalence test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum EquivalenceCertificate {
    /// `perm[i]` is the image of coordinate `i` (0-based); applying it to
    /// the first code yields the second.
    Equivalent { perm: Vec<usize> },
    Distinct { reason: String },
}

impl EquivalenceCertificate {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivalenceCertificate::Equivalent { .. })
    }

    pub fn permutation(&self) -> Option<&[usize]> {
        match self {
            EquivalenceCertificate::Equivalent { perm } => Some(perm),
            EquivalenceCertificate::Distinct { .. } => None,
        }
    }
}

/// True when `perm` is a permutation mapping every generator row of `a`
/// into `b` (and the codes have equal dimension).
pub fn verify_permutation(a: &LinearCode, b: &LinearCode, perm: &[usize]) -> bool {
    if a.n() != b.n() || a.k() != b.k() || perm.len() != a.n() {
        return false;
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
            return false;
        }
    }
    a.rows().iter().all(|r| b.contains(&r.permute(perm)))
}

pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// Coordinates and blocks of the low-weight incidence structure.
struct Incidence {
    n: usize,
    blocks: Vec<Vec<u32>>,
    point_blocks: Vec<Vec<u32>>,
    block_weights: Vec<u32>,
}

impl Incidence {
    fn new(n: usize, words: &[BitVector]) -> Self {
        let mut point_blocks = vec![Vec::new(); n];
        let blocks: Vec<Vec<u32>> = words
            .iter()
            .enumerate()
            .map(|(b, w)| {
                let pts: Vec<u32> = w.support().map(|p| p as u32).collect();
                for &p in &pts {
                    point_blocks[p as usize].push(b as u32);
                }
                pts
            })
            .collect();
        let block_weights = words.iter().map(|w| w.weight() as u32).collect();
        Self { n, blocks, point_blocks, block_weights }
    }

    fn vertices(&self) -> usize {
        self.n + self.blocks.len()
    }

    fn initial_keys(&self) -> Vec<u64> {
        let mut keys = vec![0u64; self.vertices()];
        for (b, &w) in self.block_weights.iter().enumerate() {
            keys[self.n + b] = 1 + w as u64;
        }
        keys
    }

    fn step_keys(&self, colors: &[u32]) -> Vec<u64> {
        let n = self.n;
        let mut keys = Vec::with_capacity(self.vertices());
        for (p, bs) in self.point_blocks.iter().enumerate() {
            let acc = bs.iter().fold(0u64, |s, &b| s.wrapping_add(mix(colors[n + b as usize] as u64)));
            keys.push(combine(colors[p], acc));
        }
        for (b, ps) in self.blocks.iter().enumerate() {
            let acc = ps.iter().fold(0u64, |s, &p| s.wrapping_add(mix(colors[p as usize] as u64)));
            keys.push(combine(colors[n + b], acc));
        }
        keys
    }
}

#[inline]
fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

#[inline]
fn combine(color: u32, acc: u64) -> u64 {
    mix(mix(color as u64) ^ acc)
}

/// Replaces keys by their rank among the distinct keys. The trace lists the
/// distinct keys with multiplicities and is equal for isomorphic inputs.
fn rank_keys(keys: &[u64]) -> (Vec<u32>, Vec<(u64, u32)>) {
    let mut sorted = keys.to_vec();
    sorted.sort_unstable();
    let mut trace: Vec<(u64, u32)> = Vec::new();
    for k in sorted {
        match trace.last_mut() {
            Some((last, c)) if *last == k => *c += 1,
            _ => trace.push((k, 1)),
        }
    }
    let colors = keys
        .iter()
        .map(|k| trace.binary_search_by_key(k, |&(x, _)| x).unwrap() as u32)
        .collect();
    (colors, trace)
}

fn class_count(colors: &[u32]) -> usize {
    colors.iter().copied().max().map_or(0, |m| m as usize + 1)
}

/// Refines both colourings to stability; false as soon as they diverge.
fn refine_pair(ia: &Incidence, ib: &Incidence, ca: &mut Vec<u32>, cb: &mut Vec<u32>) -> bool {
    let mut classes = class_count(ca);
    loop {
        let (na, ta) = rank_keys(&ia.step_keys(ca));
        let (nb, tb) = rank_keys(&ib.step_keys(cb));
        if ta != tb {
            return false;
        }
        *ca = na;
        *cb = nb;
        if ta.len() == classes {
            return true;
        }
        classes = ta.len();
    }
}

/// A code with everything the pairwise search needs, computed once.
pub struct Prepared {
    code: LinearCode,
    signature: InvariantSignature,
    block_weight: usize,
    incidence: Incidence,
}

impl Prepared {
    pub fn new(code: LinearCode) -> Result<Self> {
        let signature = signature(&code)?;
        Self::with_signature(code, signature)
    }

    fn with_signature(code: LinearCode, signature: InvariantSignature) -> Result<Self> {
        let (block_weight, words) = spanning_words(&code, signature.d)?;
        let incidence = Incidence::new(code.n(), &words);
        Ok(Self { code, signature, block_weight, incidence })
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn signature(&self) -> &InvariantSignature {
        &self.signature
    }
}

/// Words of weight `≤ w` for the least `w ≥ d` at which they span the
/// code, capped at [`MAX_BLOCKS`] words.
fn spanning_words(c: &LinearCode, d: usize) -> Result<(usize, Vec<BitVector>)> {
    let mut best = (d, low_weight_words(c, d)?);
    let mut w = d;
    loop {
        let rank = BitMatrix::from_rows(c.n(), best.1.clone())?.rank();
        if rank == c.k() || w >= c.n() {
            return Ok(best);
        }
        w += 1;
        let words = low_weight_words(c, w)?;
        if words.len() > MAX_BLOCKS {
            return Ok(best);
        }
        best = (w, words);
    }
}

/// Tests two prepared codes for permutation equivalence.
pub fn compare_prepared(a: &Prepared, b: &Prepared) -> EquivalenceCertificate {
    if let Some(field) = a.signature.first_difference(&b.signature) {
        return EquivalenceCertificate::Distinct { reason: format!("{field} differs") };
    }
    if a.block_weight != b.block_weight || a.incidence.blocks.len() != b.incidence.blocks.len() {
        return EquivalenceCertificate::Distinct {
            reason: "weight at which low-weight words span differs".into(),
        };
    }
    let (ia, ib) = (&a.incidence, &b.incidence);
    let (mut ca, ta) = rank_keys(&ia.initial_keys());
    let (mut cb, tb) = rank_keys(&ib.initial_keys());
    if ta != tb || !refine_pair(ia, ib, &mut ca, &mut cb) {
        return EquivalenceCertificate::Distinct { reason: "incidence refinement differs".into() };
    }
    match backtrack(a, b, ca, cb) {
        Some(perm) => EquivalenceCertificate::Equivalent { perm },
        None => EquivalenceCertificate::Distinct { reason: "exhaustive search found no permutation".into() },
    }
}

fn backtrack(a: &Prepared, b: &Prepared, ca: Vec<u32>, cb: Vec<u32>) -> Option<Vec<usize>> {
    let n = a.incidence.n;
    let mut sizes: HashMap<u32, usize> = HashMap::new();
    for &c in &ca[..n] {
        *sizes.entry(c).or_default() += 1;
    }
    let target = sizes
        .iter()
        .filter(|&(_, &s)| s > 1)
        .min_by_key(|&(&c, &s)| (s, c))
        .map(|(&c, _)| c);
    let Some(cell) = target else {
        let mut at = HashMap::with_capacity(n);
        for (j, &c) in cb[..n].iter().enumerate() {
            at.insert(c, j);
        }
        let perm: Vec<usize> = ca[..n].iter().map(|c| at[c]).collect();
        return verify_permutation(&a.code, &b.code, &perm).then_some(perm);
    };
    let fresh = class_count(&ca) as u32;
    let v = (0..n).find(|&i| ca[i] == cell).unwrap();
    for w in (0..n).filter(|&j| cb[j] == cell) {
        let (mut ca2, mut cb2) = (ca.clone(), cb.clone());
        ca2[v] = fresh;
        cb2[w] = fresh;
        if refine_pair(&a.incidence, &b.incidence, &mut ca2, &mut cb2) {
            if let Some(perm) = backtrack(a, b, ca2, cb2) {
                return Some(perm);
            }
        }
    }
    None
}

/// Decides whether `b` is a coordinate permutation of `a`.
pub fn are_equivalent(a: &LinearCode, b: &LinearCode) -> Result<EquivalenceCertificate> {
    if a.n() != b.n() || a.k() != b.k() {
        return Err(Error::Argument(format!(
            "cannot compare [{}, {}] with [{}, {}]",
            a.n(),
            a.k(),
            b.n(),
            b.k()
        )));
    }
    if a == b {
        return Ok(EquivalenceCertificate::Equivalent { perm: (0..a.n()).collect() });
    }
    let pa = Prepared::new(a.clone())?;
    let pb = Prepared::new(b.clone())?;
    Ok(compare_prepared(&pa, &pb))
}

/// One member of an equivalence class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassMember {
    /// Position in the input list.
    pub index: usize,
    /// Maps this member onto the class representative.
    pub perm: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceClass {
    /// Input position of the representative, the member whose
    /// serialized generator is lexicographically least.
    pub representative: usize,
    /// All members including the representative, in input order.
    pub members: Vec<ClassMember>,
}

/// Partitions `codes` into permutation-equivalence classes. Classes are
/// ordered by their representatives' serialized generators.
pub fn classify(codes: &[LinearCode]) -> Result<Vec<EquivalenceClass>> {
    classify_with(codes, Execution::default())
}

pub fn classify_with(codes: &[LinearCode], exec: Execution) -> Result<Vec<EquivalenceClass>> {
    if let Some(first) = codes.first() {
        if let Some(bad) = codes.iter().find(|c| (c.n(), c.k()) != (first.n(), first.k())) {
            return Err(Error::Argument(format!(
                "mixed parameters [{}, {}] and [{}, {}]",
                first.n(),
                first.k(),
                bad.n(),
                bad.k()
            )));
        }
    }
    // Only signatures are kept for every code; the incidence structures
    // live for class representatives only, which keeps memory bounded by
    // the number of classes rather than the number of inputs.
    let signatures: Vec<Result<InvariantSignature>> = map_chunks(exec, codes.len(), |i| signature(&codes[i]));
    let signatures: Vec<InvariantSignature> = signatures.into_iter().collect::<Result<_>>()?;

    let mut buckets: BTreeMap<&InvariantSignature, Vec<usize>> = BTreeMap::new();
    for (i, s) in signatures.iter().enumerate() {
        buckets.entry(s).or_default().push(i);
    }
    let buckets: Vec<Vec<usize>> = buckets.into_values().collect();
    let per_bucket = map_chunks(exec, buckets.len(), |b| classify_bucket(codes, &signatures, &buckets[b]));

    let mut classes: Vec<EquivalenceClass> = Vec::new();
    for part in per_bucket {
        classes.extend(part?);
    }
    classes.sort_by(|x, y| codes[x.representative].rows().cmp(codes[y.representative].rows()));
    Ok(classes)
}

fn classify_bucket(
    codes: &[LinearCode],
    signatures: &[InvariantSignature],
    bucket: &[usize],
) -> Result<Vec<EquivalenceClass>> {
    let mut order = bucket.to_vec();
    order.sort_by(|&x, &y| codes[x].rows().cmp(codes[y].rows()).then(x.cmp(&y)));
    let mut classes: Vec<(Prepared, EquivalenceClass)> = Vec::new();
    for i in order {
        let p = Prepared::with_signature(codes[i].clone(), signatures[i].clone())?;
        let found = classes.iter_mut().find_map(|(rep, class)| match compare_prepared(&p, rep) {
            EquivalenceCertificate::Equivalent { perm } => Some((class, perm)),
            EquivalenceCertificate::Distinct { .. } => None,
        });
        match found {
            Some((class, perm)) => class.members.push(ClassMember { index: i, perm }),
            None => {
                let members = vec![ClassMember { index: i, perm: (0..codes[i].n()).collect() }];
                classes.push((p, EquivalenceClass { representative: i, members }));
            }
        }
    }
    Ok(classes
        .into_iter()
        .map(|(_, mut class)| {
            class.members.sort_by_key(|m| m.index);
            class
        })
        .collect())
}

/// JSON classification report with 1-based permutation images.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClassificationReport {
    pub classes: Vec<ReportClass>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportClass {
    pub representative: String,
    pub members: Vec<ReportMember>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportMember {
    pub name: String,
    /// Image of coordinate `i` under the map onto the representative, at
    /// position `i - 1`.
    pub perm: Vec<usize>,
}

impl ClassificationReport {
    pub fn new(names: &[String], classes: &[EquivalenceClass]) -> Self {
        let classes = classes
            .iter()
            .map(|c| ReportClass {
                representative: names[c.representative].clone(),
                members: c
                    .members
                    .iter()
                    .map(|m| ReportMember {
                        name: names[m.index].clone(),
                        perm: m.perm.iter().map(|p| p + 1).collect(),
                    })
                    .collect(),
            })
            .collect();
        Self { classes }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::small::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn shuffled(c: &LinearCode, seed: u64) -> (LinearCode, Vec<usize>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..c.n()).collect();
        perm.shuffle(&mut rng);
        (c.permute(&perm), perm)
    }

    #[test]
    fn signature_is_permutation_invariant() {
        for c in [b12(), e8().direct_sum(&i2_power(2)).unwrap(), b12().direct_sum(&e8()).unwrap()] {
            let (p, _) = shuffled(&c, 3);
            assert_eq!(signature(&c).unwrap(), signature(&p).unwrap());
        }
    }

    #[test]
    fn identical_codes_give_identity() {
        let c = b12();
        let cert = are_equivalent(&c, &c).unwrap();
        assert_eq!(cert.permutation().unwrap(), (0..12).collect::<Vec<_>>().as_slice());
    }

    #[test]
    fn finds_hidden_permutations() {
        for (i, c) in [b12(), i2_power(8), e8().direct_sum(&e8()).unwrap(), b12().direct_sum(&i2_power(2)).unwrap()]
            .into_iter()
            .enumerate()
        {
            let (p, _) = shuffled(&c, 10 + i as u64);
            let cert = are_equivalent(&c, &p).unwrap();
            let perm = cert.permutation().expect("equivalent");
            assert!(verify_permutation(&c, &p, perm));
            assert!(verify_permutation(&p, &c, &invert_permutation(perm)));
        }
    }

    #[test]
    fn separates_inequivalent_codes() {
        let a = e8().direct_sum(&i2_power(2)).unwrap();
        let b = b12();
        let cert = are_equivalent(&a, &b).unwrap();
        assert!(!cert.is_equivalent());
        assert!(are_equivalent(&e8(), &b12()).is_err());
    }

    #[test]
    fn verify_rejects_non_permutations() {
        let c = b12();
        assert!(!verify_permutation(&c, &c, &[0; 12]));
        assert!(!verify_permutation(&c, &c, &[0, 1, 2]));
        let mut swap: Vec<usize> = (0..12).collect();
        swap.swap(0, 4);
        assert!(!verify_permutation(&c, &c, &swap));
    }

    #[test]
    fn classify_examples() {
        let c = b12();
        let single = classify(&[c.clone()]).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].members.len(), 1);

        let other = e8().direct_sum(&i2_power(2)).unwrap();
        let list = vec![
            shuffled(&c, 1).0,
            other.clone(),
            shuffled(&c, 2).0,
            shuffled(&other, 3).0,
            c.clone(),
        ];
        let classes = classify(&list).unwrap();
        assert_eq!(classes.len(), 2);
        let mut sizes: Vec<usize> = classes.iter().map(|k| k.members.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 3]);
        for class in &classes {
            let rep = &list[class.representative];
            for m in &class.members {
                assert!(verify_permutation(&list[m.index], rep, &m.perm));
                assert!(list[m.index].rows() >= rep.rows());
            }
        }
        let mut reversed = list.clone();
        reversed.reverse();
        let again = classify(&reversed).unwrap();
        let reps: Vec<&LinearCode> = classes.iter().map(|k| &list[k.representative]).collect();
        let reps2: Vec<&LinearCode> = again.iter().map(|k| &reversed[k.representative]).collect();
        assert_eq!(reps, reps2);
        assert!(classify(&[b12(), e8()]).is_err());
    }

    #[test]
    fn report_uses_one_based_images() {
        let c = b12();
        let classes = classify(&[c.clone(), shuffled(&c, 5).0]).unwrap();
        let names = vec!["a".to_string(), "b".to_string()];
        let report = ClassificationReport::new(&names, &classes);
        assert_eq!(report.classes.len(), 1);
        for m in &report.classes[0].members {
            let mut sorted = m.perm.clone();
            sorted.sort();
            assert_eq!(sorted, (1..=12).collect::<Vec<_>>());
        }
    }
}
