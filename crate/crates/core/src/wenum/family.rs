//! Extremal weight-enumerator families at lengths 58 and 60, and the
//! shadow balance `B_{d-1} = A_d` for codes whose shadow has weight-1
//! vectors.
//!
//! Known closed forms of the two lowest coefficients:
//!
//! | family | length | `A_d` | `A_{d+2}` |
//! |--------|--------|-------|-----------|
//! | W60_1  | 60 | `2555 + 64β` | `33600 − 384β` |
//! | W60_2  | 60 | `3451` | `24128` |
//! | W58_1  | 58 | `165 − 2γ` | `5078 + 2γ` (shadow `y + γy⁹ + …`) |
//! | W58_2  | 58 | `319 − 24β − 2γ` | `3132 + 152β + 2γ` |

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{ShadowDistribution, WeightDistribution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    W60_1,
    W60_2,
    W58_1,
    W58_2,
    Unknown,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::W60_1 => "W60_1",
            Family::W60_2 => "W60_2",
            Family::W58_1 => "W58_1",
            Family::W58_2 => "W58_2",
            Family::Unknown => "unknown",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub family: Family,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<i64>,
    /// Why no family matched.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl FamilyParams {
    fn known(family: Family, beta: Option<i64>, gamma: Option<i64>) -> Self {
        Self { family, beta, gamma, diagnostic: None }
    }

    fn unknown(why: String) -> Self {
        Self { family: Family::Unknown, beta: None, gamma: None, diagnostic: Some(why) }
    }
}

/// Largest possible minimum weight of a singly even self-dual code, for the
/// lengths handled here.
pub fn extremal_min_weight(n: usize) -> Option<usize> {
    match n {
        58 => Some(10),
        60 => Some(12),
        _ => None,
    }
}

fn exact_div(num: i64, den: i64) -> Option<i64> {
    (num % den == 0).then_some(num / den)
}

/// Identifies the family of an extremal weight enumerator and solves for
/// its parameters from the two lowest nonzero coefficients, using the
/// shadow to separate W58_1 (shadow minimum weight 1) from W58_2.
pub fn classify_enumerator(w: &WeightDistribution, s: &ShadowDistribution) -> FamilyParams {
    let n = w.n();
    let Some(d) = w.min_nonzero_weight() else {
        return FamilyParams::unknown("distribution has no nonzero weights".into());
    };
    if extremal_min_weight(n) != Some(d) {
        return FamilyParams::unknown(format!("no family registered for (n, d) = ({n}, {d})"));
    }
    let a = |i: usize| w.get(i) as i64;
    match n {
        60 => {
            let (a12, a14) = (a(12), a(14));
            if (a12, a14) == (3451, 24128) {
                return FamilyParams::known(Family::W60_2, None, None);
            }
            match exact_div(a12 - 2555, 64) {
                Some(beta) if a14 == 33600 - 384 * beta => {
                    FamilyParams::known(Family::W60_1, Some(beta), None)
                }
                Some(beta) => FamilyParams::unknown(format!(
                    "A_12 = {a12} gives beta = {beta} but A_14 = {a14} != {}",
                    33600 - 384 * beta
                )),
                None => FamilyParams::unknown(format!("A_12 = {a12} is not 2555 + 64*beta")),
            }
        }
        58 => {
            let (a10, a12) = (a(10), a(12));
            if s.min_weight_present() == Some(1) {
                if s.get(1) != 1 {
                    return FamilyParams::unknown(format!(
                        "shadow has {} vectors of weight 1, W58_1 has one",
                        s.get(1)
                    ));
                }
                let Some(gamma) = exact_div(165 - a10, 2) else {
                    return FamilyParams::unknown(format!("A_10 = {a10} is not 165 - 2*gamma"));
                };
                if a12 != 5078 + 2 * gamma {
                    return FamilyParams::unknown(format!(
                        "A_12 = {a12} != 5078 + 2*gamma with gamma = {gamma}"
                    ));
                }
                if s.get(9) as i64 != gamma {
                    return FamilyParams::unknown(format!(
                        "B_9 = {} disagrees with gamma = {gamma}",
                        s.get(9)
                    ));
                }
                return FamilyParams::known(Family::W58_1, None, Some(gamma));
            }
            let Some(beta) = exact_div(a10 + a12 - 3451, 128) else {
                return FamilyParams::unknown(format!(
                    "A_10 + A_12 = {} is not 3451 + 128*beta",
                    a10 + a12
                ));
            };
            if !(0..=2).contains(&beta) {
                return FamilyParams::unknown(format!("W58_2 needs beta in {{0,1,2}}, got {beta}"));
            }
            match exact_div(319 - 24 * beta - a10, 2) {
                Some(gamma) => FamilyParams::known(Family::W58_2, Some(beta), Some(gamma)),
                None => FamilyParams::unknown(format!("A_10 = {a10} leaves a fractional gamma")),
            }
        }
        _ => unreachable!("guarded by extremal_min_weight"),
    }
}

/// Result of testing `B_{d-1} = A_d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum BalanceVerdict {
    Holds { count: u64 },
    /// `weight_one_vectors > 1` marks shadows with several weight-1
    /// vectors, which only happens in degenerate cases such as `n = 2`.
    Violated { shadow: u64, code: u64, weight_one_vectors: u64 },
    NotApplicable { reason: String },
}

/// Checks `B_{d-1} = A_d` for a code of length `n ≡ 2 (mod 8)` and minimum
/// weight `d ≡ 2 (mod 4)` whose shadow contains a weight-1 vector.
pub fn check_shadow_balance(w: &WeightDistribution, s: &ShadowDistribution, d: usize) -> BalanceVerdict {
    let n = w.n();
    let reason = if n % 8 != 2 {
        Some(format!("length {n} is not 2 mod 8"))
    } else if d % 4 != 2 {
        Some(format!("minimum weight {d} is not 2 mod 4"))
    } else if s.get(1) == 0 {
        Some("shadow has no vector of weight 1".to_string())
    } else {
        None
    };
    if let Some(reason) = reason {
        return BalanceVerdict::NotApplicable { reason };
    }
    let (shadow, code) = (s.get(d - 1), w.get(d));
    if shadow == code {
        BalanceVerdict::Holds { count: code }
    } else {
        BalanceVerdict::Violated { shadow, code, weight_one_vectors: s.get(1) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BalanceSolution {
    Unique(Ratio<i128>),
    /// Parallel lines: no parameter value works.
    NoSolution,
    /// Identical lines: every parameter value works.
    All,
}

/// Solves `a0 + a1·t = b0 + b1·t` exactly.
pub fn solve_shadow_balance(a0: i64, a1: i64, b0: i64, b1: i64) -> BalanceSolution {
    let slope = a1 as i128 - b1 as i128;
    let gap = b0 as i128 - a0 as i128;
    if slope == 0 {
        if gap == 0 {
            BalanceSolution::All
        } else {
            BalanceSolution::NoSolution
        }
    } else {
        BalanceSolution::Unique(Ratio::new(gap, slope))
    }
}
