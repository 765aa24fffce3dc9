//! Self-dual neighbors.
//!
//! Two self-dual codes of length `n` are neighbors when they meet in
//! dimension `n/2 - 1`. The neighbors of `C` are enumerated through the
//! codimension-one subcodes `B ⊃ ⟨1⟩` of `C`, one per nonzero functional
//! `f` on `C` with `f(1) = 0`. `B^⊥ / B` has three nonzero classes: `C`
//! itself and two self-dual neighbors.

use std::collections::BTreeSet;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::codes::LinearCode;
use crate::equivalence::{compare_prepared, EquivalenceClass, Prepared};
use crate::error::{Error, Result};
use crate::exec::{map_chunks, Execution};
use crate::gf2::BitVector;
use crate::wenum::{min_weight_bound, MinWeightBound};

/// Functionals scanned by a survey without the extended flag.
pub const SURVEY_BUDGET: u64 = 1 << 20;

/// A neighbor given by its base code and the support of `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborDescriptor {
    pub base: String,
    /// Sorted 1-based coordinates.
    pub supp: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl NeighborDescriptor {
    pub fn new(base: &str, supp: &[usize]) -> Result<Self> {
        let mut supp = supp.to_vec();
        supp.sort_unstable();
        supp.dedup();
        if supp.len() % 2 == 1 {
            return Err(Error::Argument(format!("support of odd size {}", supp.len())));
        }
        Ok(Self { base: base.to_string(), supp, name: None })
    }

    pub fn vector(&self, n: usize) -> Result<BitVector> {
        BitVector::from_coords(n, &self.supp)
    }
}

/// Parses JSON lines of descriptors, skipping blank lines.
pub fn parse_descriptors(text: &str) -> Result<Vec<NeighborDescriptor>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))
        })
        .collect()
}

pub fn write_descriptors(ds: &[NeighborDescriptor]) -> String {
    ds.iter()
        .map(|d| serde_json::to_string(d).expect("descriptor serializes") + "\n")
        .collect()
}

/// `⟨C ∩ x^⊥, x⟩` for a self-dual `c` and an even-weight `x ∉ c`.
pub fn neighbor(c: &LinearCode, x: &BitVector) -> Result<LinearCode> {
    if x.len() != c.n() {
        return Err(Error::Dimension(format!("vector of length {} for code of length {}", x.len(), c.n())));
    }
    if !c.is_self_dual() {
        return Err(Error::Argument("base code is not self-dual".into()));
    }
    if x.weight() % 2 == 1 {
        return Err(Error::Argument(format!("x has odd weight {}", x.weight())));
    }
    if c.contains(x) {
        return Err(Error::Argument("not a proper neighbor: x lies in the code".into()));
    }
    let rows = c.rows();
    let Some(i0) = rows.iter().position(|r| r.dot(x)) else {
        return Err(Error::Internal("x is orthogonal to a self-dual code but not in it".into()));
    };
    let mut gens: Vec<BitVector> = rows
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != i0)
        .map(|(_, r)| if r.dot(x) { *r ^ rows[i0] } else { *r })
        .collect();
    gens.push(*x);
    LinearCode::from_rows(c.n(), gens)
}

/// Enumerates the self-dual neighbors of a self-dual code by functional
/// index. Index `t` in `1..=functional_count()` selects the functional
/// whose values on the generator rows, with one row left out, are the bits
/// of `t`; the left-out row's value is fixed by `f(1) = 0`.
pub struct NeighborEnumerator {
    code: LinearCode,
    /// Rows whose sum is the all-one vector.
    ones: Vec<bool>,
    /// Row whose functional value is determined by the others.
    dependent: usize,
}

impl NeighborEnumerator {
    pub fn new(c: &LinearCode) -> Result<Self> {
        if !c.is_self_dual() {
            return Err(Error::Argument("code is not self-dual".into()));
        }
        let ones = BitVector::ones(c.n());
        if !c.contains(&ones) {
            return Err(Error::Domain("all-one vector is not in the code".into()));
        }
        let pivots = c.pivots();
        let ones: Vec<bool> = pivots.iter().map(|&p| ones.get(p)).collect();
        let dependent = ones.iter().rposition(|&b| b).expect("nonzero code");
        Ok(Self { code: c.clone(), ones, dependent })
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    /// Number of hyperplanes of the code containing the all-one vector.
    pub fn functional_count(&self) -> u64 {
        (1u64 << (self.code.k() - 1)) - 1
    }

    fn functional(&self, index: u64) -> Vec<bool> {
        let k = self.code.k();
        let mut f = vec![false; k];
        let mut bit = 0;
        let mut parity = false;
        for (j, slot) in f.iter_mut().enumerate() {
            if j == self.dependent {
                continue;
            }
            *slot = (index >> bit) & 1 == 1;
            parity ^= *slot && self.ones[j];
            bit += 1;
        }
        f[self.dependent] = parity;
        f
    }

    /// The two neighbors for functional `index`.
    pub fn neighbors_at(&self, index: u64) -> Result<[LinearCode; 2]> {
        if index == 0 || index > self.functional_count() {
            return Err(Error::Argument(format!("functional index {index} out of range")));
        }
        let f = self.functional(index);
        let rows = self.code.rows();
        let n = self.code.n();
        let i0 = f.iter().position(|&b| b).expect("nonzero functional");
        let mut basis: Vec<BitVector> = Vec::with_capacity(rows.len());
        let mut y = BitVector::zeros(n);
        for (j, (r, &p)) in rows.iter().zip(self.code.pivots()).enumerate() {
            if f[j] {
                y.set(p, true);
            }
            if j != i0 {
                basis.push(if f[j] { *r ^ rows[i0] } else { *r });
            }
        }
        let mut first = basis.clone();
        first.push(y);
        basis.push(y ^ rows[i0]);
        Ok([LinearCode::from_rows(n, first)?, LinearCode::from_rows(n, basis)?])
    }

    /// Neighbors accepted by `keep` for functional indices in `range`,
    /// tagged with their index and ordered by it.
    pub fn scan<F>(&self, range: Range<u64>, exec: Execution, keep: F) -> Result<Vec<(u64, LinearCode)>>
    where
        F: Fn(&LinearCode) -> bool + Sync + Send,
    {
        let lo = range.start.max(1);
        let hi = range.end.min(self.functional_count() + 1);
        if lo >= hi {
            return Ok(Vec::new());
        }
        let len = hi - lo;
        let chunks = len.min(1024) as usize;
        let per = len.div_ceil(chunks as u64);
        let parts = map_chunks(exec, chunks, |c| -> Result<Vec<(u64, LinearCode)>> {
            let start = lo + c as u64 * per;
            let end = (start + per).min(hi);
            let mut found = Vec::new();
            for t in start..end {
                for code in self.neighbors_at(t)? {
                    if keep(&code) {
                        found.push((t, code));
                    }
                }
            }
            Ok(found)
        });
        let mut out = Vec::new();
        for p in parts {
            out.extend(p?);
        }
        Ok(out)
    }
}

/// Calls `visit` on every self-dual neighbor of `c`, in functional order.
pub fn for_each_neighbor<F: FnMut(LinearCode)>(c: &LinearCode, mut visit: F) -> Result<()> {
    let e = NeighborEnumerator::new(c)?;
    for t in 1..=e.functional_count() {
        for code in e.neighbors_at(t)? {
            visit(code);
        }
    }
    Ok(())
}

/// All self-dual neighbors of `c` accepted by `keep`.
pub fn enumerate_self_dual_neighbors<F>(c: &LinearCode, keep: F) -> Result<Vec<LinearCode>>
where
    F: Fn(&LinearCode) -> bool + Sync + Send,
{
    let e = NeighborEnumerator::new(c)?;
    let all = e.scan(1..e.functional_count() + 1, Execution::default(), keep)?;
    Ok(all.into_iter().map(|(_, code)| code).collect())
}

/// Outcome of an extremal neighbor survey.
#[derive(Clone, Debug)]
pub struct SurveyResult {
    /// Neighbors with minimum weight at least the target, deduplicated.
    pub extremal: Vec<LinearCode>,
    /// Classes among `extremal` equivalent to no known code.
    pub new_classes: Vec<EquivalenceClass>,
}

impl SurveyResult {
    pub fn new_codes(&self) -> Vec<&LinearCode> {
        self.new_classes.iter().map(|c| &self.extremal[c.representative]).collect()
    }
}

/// Finds all neighbors of `c` with minimum weight `≥ d_min`, classifies
/// them and drops classes equivalent to a code in `known`. Without
/// `extended`, codes with more than [`SURVEY_BUDGET`] functionals are
/// refused.
pub fn extremal_neighbor_survey(
    c: &LinearCode,
    d_min: usize,
    known: &[LinearCode],
    extended: bool,
    exec: Execution,
) -> Result<SurveyResult> {
    let e = NeighborEnumerator::new(c)?;
    if !extended && e.functional_count() > SURVEY_BUDGET {
        return Err(Error::Budget(format!(
            "{} functionals exceed the default budget of {SURVEY_BUDGET}; rerun with the extended flag",
            e.functional_count()
        )));
    }
    let found = e.scan(1..e.functional_count() + 1, exec, |code| reaches_quietly(code, d_min))?;
    survey_from_found(found.into_iter().map(|(_, code)| code).collect(), known, exec)
}

fn reaches_quietly(code: &LinearCode, d: usize) -> bool {
    matches!(min_weight_bound(code, Some(d)), Ok(b) if b.meets(d))
}

/// Second half of a survey: deduplicates the extremal neighbors found by
/// a scan (possibly split over several runs), classifies them and drops
/// classes equivalent to a code in `known`.
pub fn survey_from_found(found: Vec<LinearCode>, known: &[LinearCode], exec: Execution) -> Result<SurveyResult> {
    let mut seen = BTreeSet::new();
    let extremal: Vec<LinearCode> = found.into_iter().filter(|code| seen.insert(code.rows().to_vec())).collect();
    let classes = crate::equivalence::classify_with(&extremal, exec)?;
    let shape = extremal.first().map(|c| (c.n(), c.k()));
    let known: Vec<Prepared> = known
        .iter()
        .filter(|k| Some((k.n(), k.k())) == shape)
        .map(|k| Prepared::new(k.clone()))
        .collect::<Result<_>>()?;
    let mut new_classes = Vec::new();
    for class in classes {
        let rep = Prepared::new(extremal[class.representative].clone())?;
        if !known.iter().any(|k| compare_prepared(&rep, k).is_equivalent()) {
            new_classes.push(class);
        }
    }
    Ok(SurveyResult { extremal, new_classes })
}

/// A vector `x` with `neighbor(base, x) = nb`: any word of `nb` outside
/// `base`. The lowest-weight generator row of that kind is chosen.
pub fn witness(base: &LinearCode, nb: &LinearCode) -> Option<BitVector> {
    nb.rows().iter().filter(|r| !base.contains(r)).min_by_key(|r| (r.weight(), **r)).copied()
}

/// True when `c` has minimum weight at least `d`.
pub fn reaches(c: &LinearCode, d: usize) -> Result<bool> {
    Ok(!matches!(min_weight_bound(c, Some(d))?, MinWeightBound::Below(_)))
}
