use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::WeightDistribution;

fn binomials(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows = vec![vec![BigInt::one()]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![BigInt::one(); i + 1];
        for j in 1..i {
            row[j] = &prev[j - 1] + &prev[j];
        }
        rows.push(row);
    }
    rows
}

/// Distribution of the dual code, `2^{-k} Σ_i A_i K_j(i)` with Krawtchouk
/// polynomials `K_j`, or `None` when some coefficient is not an integer.
pub fn macwilliams_transform(w: &WeightDistribution, k: usize) -> Option<Vec<BigInt>> {
    let n = w.n();
    let binom = binomials(n);
    let c = |a: usize, b: isize| -> BigInt {
        if b < 0 || b as usize > a {
            BigInt::zero()
        } else {
            binom[a][b as usize].clone()
        }
    };
    let scale = BigInt::one() << k;
    let mut out = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut sum = BigInt::zero();
        for (i, &a) in w.counts().iter().enumerate() {
            if a == 0 {
                continue;
            }
            let mut kraw = BigInt::zero();
            for s in 0..=j.min(i) {
                let term = c(i, s as isize) * c(n - i, j as isize - s as isize);
                if s % 2 == 0 {
                    kraw += term;
                } else {
                    kraw -= term;
                }
            }
            sum += kraw * BigInt::from(a);
        }
        if !(&sum % &scale).is_zero() {
            return None;
        }
        out.push(sum / &scale);
    }
    Some(out)
}

/// True when the MacWilliams transform of `w` (for a code of dimension `k`)
/// is `w` itself, as it must be for a self-dual code.
pub fn macwilliams_check(w: &WeightDistribution, k: usize) -> bool {
    match macwilliams_transform(w, k) {
        Some(dual) => dual
            .iter()
            .zip(w.counts())
            .all(|(d, &a)| *d == BigInt::from(a)),
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::small::*;
    use crate::wenum::weight_distribution;

    #[test]
    fn trivial_cases() {
        assert!(macwilliams_check(&WeightDistribution::from_counts(vec![1, 0, 1]), 1));
        assert!(!macwilliams_check(&WeightDistribution::from_counts(vec![1, 1, 0, 0]), 1));
    }

    #[test]
    fn self_dual_codes_are_fixed_points() {
        for c in [e8(), b12(), i2_power(4)] {
            assert!(macwilliams_check(&weight_distribution(&c).unwrap(), c.k()));
        }
    }

    #[test]
    fn transform_gives_dual_distribution() {
        // [4,1] repetition code; its dual is the even-weight code.
        let rep = WeightDistribution::from_counts(vec![1, 0, 0, 0, 1]);
        let dual = macwilliams_transform(&rep, 1).unwrap();
        let expect: Vec<BigInt> = [1, 0, 6, 0, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(dual, expect);
    }
}
