use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::FactoredInt;
use crate::error::{Error, Result};

/// Largest ℓ accepted by [`enumerate_partitions`].
pub const MAX_PARTITION_ELL: u32 = 90;

/// A partition of ℓ stored as multiplicities `k -> m_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartitionMultiset {
    ell: u32,
    mults: BTreeMap<u32, u32>,
}

impl PartitionMultiset {
    /// Builds from parts in any order. Parts must be positive.
    pub fn from_parts(parts: &[u32]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Domain("a partition needs at least one part".into()));
        }
        let mut mults = BTreeMap::new();
        let mut ell = 0u32;
        for &p in parts {
            if p == 0 {
                return Err(Error::Domain("partition parts must be >= 1".into()));
            }
            ell = ell
                .checked_add(p)
                .ok_or(Error::Overflow("partition size"))?;
            *mults.entry(p).or_insert(0) += 1;
        }
        Ok(PartitionMultiset { ell, mults })
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// `m_k` for every part size `k` that occurs.
    pub fn multiplicities(&self) -> &BTreeMap<u32, u32> {
        &self.mults
    }

    pub fn multiplicity(&self, k: u32) -> u32 {
        self.mults.get(&k).copied().unwrap_or(0)
    }

    /// Number of parts, `m = r = Σ m_k`.
    pub fn num_parts(&self) -> u32 {
        self.mults.values().sum()
    }

    /// Parts in nondecreasing order.
    pub fn parts(&self) -> Vec<u32> {
        self.mults
            .iter()
            .flat_map(|(&k, &m)| std::iter::repeat_n(k, m as usize))
            .collect()
    }
}

impl std::fmt::Display for PartitionMultiset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.parts().iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Lazy enumeration of the partitions of ℓ as nondecreasing part lists, in
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct Partitions {
    a: Vec<u32>,
    k: usize,
    done: bool,
}

impl Partitions {
    fn new(ell: u32) -> Self {
        let mut a = vec![0u32; ell as usize + 1];
        a[1] = ell;
        Partitions {
            a,
            k: 1,
            done: false,
        }
    }
}

impl Iterator for Partitions {
    type Item = PartitionMultiset;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done || self.k == 0 {
            return None;
        }
        // ascending-composition generator
        let a = &mut self.a;
        let mut k = self.k;
        let x = a[k - 1] + 1;
        let mut y = a[k] - 1;
        k -= 1;
        while x <= y {
            a[k] = x;
            y -= x;
            k += 1;
        }
        a[k] = x + y;
        let out = PartitionMultiset::from_parts(&a[..=k]).expect("generated parts are positive");
        self.k = k;
        if k == 0 {
            self.done = true;
        }
        Some(out)
    }
}

/// All partitions of ℓ, each exactly once, as a lazy iterator.
pub fn enumerate_partitions(ell: u32) -> Result<Partitions> {
    if !(1..=MAX_PARTITION_ELL).contains(&ell) {
        return Err(Error::out_of_range(
            "ell",
            ell,
            format!("1..={MAX_PARTITION_ELL}"),
        ));
    }
    Ok(Partitions::new(ell))
}

fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `ℓ! / Π_k (k!)^{m_k} · m! / Π_k m_k!`, the upper bound on `d_λ(n)`
/// that is attained for squarefree n.
pub fn d_lambda_bound(lambda: &PartitionMultiset) -> BigUint {
    let mut denom = BigUint::one();
    for (&k, &m) in &lambda.mults {
        denom *= factorial(k).pow(m);
        denom *= factorial(m);
    }
    factorial(lambda.ell) * factorial(lambda.num_parts()) / denom
}

/// Number of ordered tuples `(n_1, …, n_r)` with product n whose multiset
/// `{Ω(n_j)}` equals λ.
pub fn d_lambda(n: &FactoredInt, lambda: &PartitionMultiset) -> Result<u64> {
    if n.big_omega() != lambda.ell {
        return Err(Error::Domain(format!(
            "Ω({}) = {} does not match ℓ = {}",
            n.n(),
            n.big_omega(),
            lambda.ell
        )));
    }
    let sizes: Vec<u32> = lambda.mults.keys().copied().collect();
    let counts: Vec<u32> = lambda.mults.values().copied().collect();
    let mut memo = HashMap::new();
    count_tuples(&n.exponents(), &counts, &sizes, &mut memo)
}

type Memo = HashMap<(Vec<u32>, Vec<u32>), u64>;

fn count_tuples(exps: &[u32], counts: &[u32], sizes: &[u32], memo: &mut Memo) -> Result<u64> {
    if counts.iter().all(|&c| c == 0) {
        return Ok(u64::from(exps.iter().all(|&e| e == 0)));
    }
    // the count is symmetric in the primes, so key on the sorted signature
    let mut key_exps: Vec<u32> = exps.iter().copied().filter(|&e| e > 0).collect();
    key_exps.sort_unstable();
    let key = (key_exps, counts.to_vec());
    if let Some(&v) = memo.get(&key) {
        return Ok(v);
    }

    let mut total = 0u64;
    let mut rest_counts = counts.to_vec();
    for (s, &size) in sizes.iter().enumerate() {
        if counts[s] == 0 {
            continue;
        }
        rest_counts[s] -= 1;
        let mut first = vec![0u32; exps.len()];
        let mut err = None;
        for_each_sub_vector(exps, size, 0, &mut first, &mut |u| {
            if err.is_some() {
                return;
            }
            let rest: Vec<u32> = exps.iter().zip(u).map(|(e, d)| e - d).collect();
            match count_tuples(&rest, &rest_counts, sizes, memo) {
                Ok(c) => match total.checked_add(c) {
                    Some(t) => total = t,
                    None => err = Some(Error::Overflow("d_lambda")),
                },
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        rest_counts[s] += 1;
    }
    memo.insert(key, total);
    Ok(total)
}

/// Calls `visit` with every `u <= bound` (componentwise) whose entries sum
/// to `remaining`.
fn for_each_sub_vector(
    bound: &[u32],
    remaining: u32,
    pos: usize,
    cur: &mut Vec<u32>,
    visit: &mut dyn FnMut(&[u32]),
) {
    if pos == bound.len() {
        if remaining == 0 {
            visit(cur);
        }
        return;
    }
    let tail: u32 = bound[pos + 1..].iter().sum();
    let lo = remaining.saturating_sub(tail);
    let hi = bound[pos].min(remaining);
    for d in lo..=hi {
        cur[pos] = d;
        for_each_sub_vector(bound, remaining - d, pos + 1, cur, visit);
    }
    cur[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> PartitionMultiset {
        PartitionMultiset::from_parts(parts).unwrap()
    }

    #[test]
    fn partitions_of_three() {
        let all: Vec<Vec<u32>> = enumerate_partitions(3).unwrap().map(|l| l.parts()).collect();
        assert_eq!(all, vec![vec![1, 1, 1], vec![1, 2], vec![3]]);
    }

    #[test]
    fn partition_of_one() {
        let all: Vec<_> = enumerate_partitions(1).unwrap().collect();
        assert_eq!(all, vec![p(&[1])]);
    }

    #[test]
    fn partition_counts() {
        assert_eq!(enumerate_partitions(5).unwrap().count(), 7);
        assert_eq!(enumerate_partitions(10).unwrap().count(), 42);
    }

    #[test]
    fn ell_range_is_checked() {
        assert!(enumerate_partitions(0).is_err());
        assert!(enumerate_partitions(91).is_err());
        assert!(enumerate_partitions(90).is_ok());
    }

    #[test]
    fn multiset_fields() {
        let l = p(&[2, 1, 2, 5]);
        assert_eq!(l.ell(), 10);
        assert_eq!(l.num_parts(), 4);
        assert_eq!(l.multiplicity(2), 2);
        assert_eq!(l.multiplicity(3), 0);
        assert_eq!(l.parts(), vec![1, 2, 2, 5]);
        assert_eq!(l.to_string(), "(1,2,2,5)");
        assert!(PartitionMultiset::from_parts(&[]).is_err());
        assert!(PartitionMultiset::from_parts(&[0, 1]).is_err());
    }

    #[test]
    fn bound_examples() {
        assert_eq!(d_lambda_bound(&p(&[1, 2])), BigUint::from(6u32));
        assert_eq!(d_lambda_bound(&p(&[7])), BigUint::from(1u32));
        assert_eq!(d_lambda_bound(&p(&[1, 1, 1])), BigUint::from(6u32));
    }

    #[test]
    fn d_lambda_examples() {
        let n30 = FactoredInt::by_trial_division(30).unwrap();
        assert_eq!(d_lambda(&n30, &p(&[1, 2])).unwrap(), 6);
        assert_eq!(d_lambda(&n30, &p(&[1, 1, 1])).unwrap(), 6);
        assert_eq!(d_lambda(&n30, &p(&[3])).unwrap(), 1);
        let n4 = FactoredInt::by_trial_division(4).unwrap();
        assert_eq!(d_lambda(&n4, &p(&[1, 1])).unwrap(), 1);
        assert!(d_lambda(&n4, &p(&[1, 2])).is_err());
    }
}
