//! Sieve-backed elementary arithmetic functions.
//!
//! [`SieveTables`] holds the smallest prime factor, μ, Ω, ω and the largest
//! prime exponent of every `n <= N`, all produced by one linear-sieve pass.
//! Everything else in the crate reads these tables in bulk.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default ceiling on the sieve limit. Roughly 13 bytes per entry are live
/// during construction, so this is a little over 1 GiB.
pub const DEFAULT_MAX_LIMIT: usize = 100_000_000;

/// An integer together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactoredInt {
    n: u64,
    factors: Vec<(u64, u32)>,
    big_omega: u32,
    small_omega: u32,
}

impl FactoredInt {
    /// Builds from `(prime, exponent)` pairs. Primes must be strictly
    /// increasing and exponents positive; primality itself is checked by
    /// trial division.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut n: u64 = 1;
        let mut prev = 1;
        for &(p, e) in &factors {
            if p <= prev || e == 0 || !is_prime_trial(p) {
                return Err(Error::Domain(format!(
                    "invalid factor {p}^{e}: primes must increase strictly and exponents be positive"
                )));
            }
            prev = p;
            for _ in 0..e {
                n = n.checked_mul(p).ok_or(Error::Overflow("factored integer"))?;
            }
        }
        let big_omega = factors.iter().map(|&(_, e)| e).sum();
        let small_omega = factors.len() as u32;
        Ok(FactoredInt {
            n,
            factors,
            big_omega,
            small_omega,
        })
    }

    /// Factors `n` by trial division. Meant for small arguments and for
    /// code paths that have no sieve at hand.
    pub fn by_trial_division(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::out_of_range("n", 0, "n >= 1"));
        }
        let mut factors = Vec::new();
        let mut m = n;
        let mut p = 2u64;
        while p * p <= m {
            if m % p == 0 {
                let mut e = 0;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                factors.push((p, e));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if m > 1 {
            factors.push((m, 1));
        }
        let big_omega = factors.iter().map(|&(_, e)| e).sum();
        let small_omega = factors.len() as u32;
        Ok(FactoredInt {
            n,
            factors,
            big_omega,
            small_omega,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Ω(n): prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.big_omega
    }

    /// ω(n): distinct prime factors.
    pub fn small_omega(&self) -> u32 {
        self.small_omega
    }

    pub fn exponents(&self) -> Vec<u32> {
        self.factors.iter().map(|&(_, e)| e).collect()
    }

    pub fn mobius(&self) -> i8 {
        if self.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.small_omega % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_squarefree(&self) -> bool {
        self.is_kappa_free(2)
    }

    /// True iff no `p^kappa` divides n. Callers validate `kappa >= 2`.
    pub fn is_kappa_free(&self, kappa: u32) -> bool {
        self.factors.iter().all(|&(_, e)| e < kappa)
    }

    pub fn is_divisible_by(&self, p: u64) -> bool {
        self.factors.iter().any(|&(q, _)| q == p)
    }

    /// Multiplies back out. Always equals [`FactoredInt::n`].
    pub fn reconstruct(&self) -> u64 {
        self.factors
            .iter()
            .fold(1u64, |acc, &(p, e)| acc * p.pow(e))
    }
}

/// Bulk arithmetic tables over `1..=limit`.
#[derive(Debug, Clone)]
pub struct SieveTables {
    limit: usize,
    spf: Vec<u32>,
    mu: Vec<i8>,
    big_omega: Vec<u8>,
    small_omega: Vec<u8>,
    max_exp: Vec<u8>,
    primes: Vec<u32>,
}

impl SieveTables {
    /// Builds the tables with [`DEFAULT_MAX_LIMIT`] as the capacity bound.
    pub fn build(limit: usize) -> Result<Self> {
        Self::build_with_cap(limit, DEFAULT_MAX_LIMIT)
    }

    pub fn build_with_cap(limit: usize, max_limit: usize) -> Result<Self> {
        if limit < 2 {
            return Err(Error::out_of_range("sieve limit", limit as i128, ">= 2"));
        }
        if limit > max_limit || limit > u32::MAX as usize {
            return Err(Error::Capacity {
                what: "sieve limit",
                requested: limit as u128,
                maximum: max_limit.min(u32::MAX as usize) as u128,
            });
        }

        let n = limit;
        let mut spf = vec![0u32; n + 1];
        let mut mu = vec![0i8; n + 1];
        let mut big_omega = vec![0u8; n + 1];
        let mut small_omega = vec![0u8; n + 1];
        let mut max_exp = vec![0u8; n + 1];
        // exponent of spf(i) in i, and i with that prime power removed
        let mut spf_exp = vec![0u8; n + 1];
        let mut rest = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();

        spf[1] = 1;
        mu[1] = 1;
        rest[1] = 1;

        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                mu[i] = -1;
                big_omega[i] = 1;
                small_omega[i] = 1;
                max_exp[i] = 1;
                spf_exp[i] = 1;
                rest[i] = 1;
                primes.push(i as u32);
            }
            let spf_i = spf[i];
            for &p in &primes {
                if p > spf_i {
                    break;
                }
                let m = i * p as usize;
                if m > n {
                    break;
                }
                spf[m] = p;
                big_omega[m] = big_omega[i] + 1;
                if p == spf_i {
                    mu[m] = 0;
                    small_omega[m] = small_omega[i];
                    spf_exp[m] = spf_exp[i] + 1;
                    rest[m] = rest[i];
                    max_exp[m] = max_exp[rest[i] as usize].max(spf_exp[m]);
                } else {
                    mu[m] = -mu[i];
                    small_omega[m] = small_omega[i] + 1;
                    spf_exp[m] = 1;
                    rest[m] = i as u32;
                    max_exp[m] = max_exp[i].max(1);
                }
            }
        }

        Ok(SieveTables {
            limit,
            spf,
            mu,
            big_omega,
            small_omega,
            max_exp,
            primes,
        })
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    fn check(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.limit {
            Err(Error::out_of_range(
                "n",
                n as i128,
                format!("1..={}", self.limit),
            ))
        } else {
            Ok(())
        }
    }

    /// Smallest prime factor, `None` for `n = 1`.
    pub fn spf(&self, n: usize) -> Result<Option<u32>> {
        self.check(n)?;
        Ok((n >= 2).then(|| self.spf[n]))
    }

    pub fn mobius(&self, n: usize) -> Result<i8> {
        self.check(n)?;
        Ok(self.mu[n])
    }

    pub fn big_omega(&self, n: usize) -> Result<u32> {
        self.check(n)?;
        Ok(self.big_omega[n] as u32)
    }

    pub fn small_omega(&self, n: usize) -> Result<u32> {
        self.check(n)?;
        Ok(self.small_omega[n] as u32)
    }

    /// Largest exponent in the factorization of n (0 for n = 1).
    pub fn max_exponent(&self, n: usize) -> Result<u32> {
        self.check(n)?;
        Ok(self.max_exp[n] as u32)
    }

    pub fn is_kappa_free(&self, n: usize, kappa: u32) -> Result<bool> {
        check_kappa(kappa)?;
        self.check(n)?;
        Ok((self.max_exp[n] as u32) < kappa)
    }

    pub fn is_squarefree(&self, n: usize) -> Result<bool> {
        self.check(n)?;
        Ok(self.mu[n] != 0)
    }

    pub fn factorize(&self, n: usize) -> Result<FactoredInt> {
        self.check(n)?;
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p as u64, e));
        }
        Ok(FactoredInt {
            n: n as u64,
            big_omega: self.big_omega[n] as u32,
            small_omega: self.small_omega[n] as u32,
            factors,
        })
    }

    /// All primes up to the limit, increasing.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Raw slices indexed by n (index 0 is padding).
    pub fn mu_slice(&self) -> &[i8] {
        &self.mu
    }

    pub fn big_omega_slice(&self) -> &[u8] {
        &self.big_omega
    }

    pub fn small_omega_slice(&self) -> &[u8] {
        &self.small_omega
    }

    pub fn max_exponent_slice(&self) -> &[u8] {
        &self.max_exp
    }

    pub fn spf_slice(&self) -> &[u32] {
        &self.spf
    }
}

pub(crate) fn check_kappa(kappa: u32) -> Result<()> {
    if kappa < 2 {
        Err(Error::out_of_range("kappa", kappa, ">= 2"))
    } else {
        Ok(())
    }
}

/// The identity of Dirichlet convolution: 1 at n = 1, 0 elsewhere.
pub fn unit(n: u64) -> u8 {
    u8::from(n == 1)
}

/// `log_k x`: the k-th iterate of `x -> max(log x, 1)`.
///
/// `iterated_log(x, 1)` is `max(log x, 1)`; `k = 0` returns `x` unchanged.
pub fn iterated_log(x: f64, k: u32) -> f64 {
    (0..k).fold(x, |acc, _| acc.ln().max(1.0))
}

/// Divisors of n in increasing order, by trial division.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes up to `bound` by a plain Eratosthenes sieve.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let b = bound as usize;
    let mut composite = vec![false; b + 1];
    let mut out = Vec::new();
    for i in 2..=b {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= b {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// The i-th prime, 1-indexed: `nth_prime(1) = 2`.
pub fn nth_prime(i: u64) -> Result<u64> {
    if i == 0 {
        return Err(Error::out_of_range("prime index", 0, ">= 1"));
    }
    // p_i < i (ln i + ln ln i) for i >= 6
    let bound = if i < 6 {
        13
    } else {
        let x = i as f64;
        (x * (x.ln() + x.ln().ln())).ceil() as u64 + 1
    };
    if bound > DEFAULT_MAX_LIMIT as u64 {
        return Err(Error::Capacity {
            what: "prime index",
            requested: i as u128,
            maximum: 5_000_000,
        });
    }
    Ok(primes_up_to(bound)[(i - 1) as usize])
}

/// 1-based position of the prime p in the sequence of primes.
pub fn prime_index(p: u64) -> Result<u64> {
    if !is_prime_trial(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    Ok(primes_up_to(p).len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sieve_entries() {
        let t = SieveTables::build(10).unwrap();
        assert_eq!(t.spf(10).unwrap(), Some(2));
        assert_eq!(t.spf(9).unwrap(), Some(3));
        assert_eq!(t.spf(1).unwrap(), None);
        assert_eq!(t.mobius(6).unwrap(), 1);
        assert_eq!(t.mobius(4).unwrap(), 0);
        assert_eq!(t.mobius(1).unwrap(), 1);
    }

    #[test]
    fn rejects_bad_limits() {
        assert!(matches!(
            SieveTables::build(1),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            SieveTables::build_with_cap(1000, 999),
            Err(Error::Capacity { .. })
        ));
        let t = SieveTables::build(10).unwrap();
        assert!(t.mobius(11).is_err());
        assert!(t.factorize(0).is_err());
    }

    #[test]
    fn factorize_examples() {
        let t = SieveTables::build(5000).unwrap();
        let f = t.factorize(12).unwrap();
        assert_eq!(f.factors(), &[(2, 2), (3, 1)]);
        assert_eq!((f.big_omega(), f.small_omega()), (3, 2));

        let one = t.factorize(1).unwrap();
        assert!(one.factors().is_empty());
        assert_eq!((one.big_omega(), one.small_omega()), (0, 0));

        let f = t.factorize(4400).unwrap();
        assert_eq!(f.factors(), &[(2, 4), (5, 2), (11, 1)]);
        assert_eq!(f.big_omega(), 7);
        assert_eq!(f, FactoredInt::by_trial_division(4400).unwrap());
    }

    #[test]
    fn kappa_free_examples() {
        let t = SieveTables::build(5000).unwrap();
        assert!(!t.is_kappa_free(8, 3).unwrap());
        assert!(t.is_kappa_free(8, 4).unwrap());
        assert!(t.is_kappa_free(4400, 5).unwrap());
        assert!(!t.is_kappa_free(4400, 4).unwrap());
        assert!(t.is_kappa_free(1, 2).unwrap());
        assert!(t.is_kappa_free(8, 1).is_err());
    }

    #[test]
    fn mobius_and_unit() {
        let t = SieveTables::build(100).unwrap();
        assert_eq!(unit(1), 1);
        assert_eq!(unit(2), 0);
        assert_eq!(t.mobius(30).unwrap(), -1);
        assert_eq!(t.mobius(12).unwrap(), 0);
    }

    #[test]
    fn large_prime_spot_check() {
        let t = SieveTables::build(1_000_000).unwrap();
        assert!(is_prime_trial(999_983));
        assert_eq!(t.mobius(999_983).unwrap(), -1);
        assert_eq!(t.spf(999_983).unwrap(), Some(999_983));
        assert_eq!(t.primes().len(), 78_498);
    }

    #[test]
    fn mobius_sums_to_unit_over_divisors() {
        let n_max = 10_000;
        let t = SieveTables::build(n_max).unwrap();
        let mut acc = vec![0i64; n_max + 1];
        for d in 1..=n_max {
            let m = t.mobius(d).unwrap() as i64;
            for k in (d..=n_max).step_by(d) {
                acc[k] += m;
            }
        }
        for n in 1..=n_max {
            assert_eq!(acc[n], unit(n as u64) as i64, "n = {n}");
        }
    }

    #[test]
    fn big_omega_bounded_by_kappa_small_omega_on_kappa_free() {
        let t = SieveTables::build(100_000).unwrap();
        for kappa in [2u32, 3, 5] {
            for n in 1..=100_000 {
                if t.is_kappa_free(n, kappa).unwrap() {
                    assert!(t.big_omega(n).unwrap() <= kappa * t.small_omega(n).unwrap());
                }
            }
        }
    }

    #[test]
    fn table_agrees_with_trial_division() {
        let t = SieveTables::build(20_000).unwrap();
        for n in 1..=20_000u64 {
            let a = t.factorize(n as usize).unwrap();
            let b = FactoredInt::by_trial_division(n).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.reconstruct(), n);
            assert_eq!(a.mobius(), t.mobius(n as usize).unwrap());
            let max_e = a.exponents().into_iter().max().unwrap_or(0);
            assert_eq!(max_e, t.max_exponent(n as usize).unwrap());
        }
    }

    #[test]
    fn iterated_log_clamps() {
        assert_eq!(iterated_log(2.0, 1), 1.0);
        assert_eq!(iterated_log(10.0, 2), 1.0);
        let x = 1e10f64;
        assert!((iterated_log(x, 2) - x.ln().ln()).abs() < 1e-12);
        assert_eq!(iterated_log(1e10, 4), 1.0);
        assert!((iterated_log(1e100, 3) - 1e100f64.ln().ln().ln()).abs() < 1e-12);
    }

    #[test]
    fn primes_and_indices() {
        assert_eq!(nth_prime(1).unwrap(), 2);
        assert_eq!(nth_prime(5).unwrap(), 11);
        assert_eq!(nth_prime(1000).unwrap(), 7919);
        assert_eq!(prime_index(11).unwrap(), 5);
        assert!(prime_index(12).is_err());
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }

    #[test]
    fn from_factors_validates() {
        assert!(FactoredInt::from_factors(vec![(3, 1), (2, 1)]).is_err());
        assert!(FactoredInt::from_factors(vec![(4, 1)]).is_err());
        assert!(FactoredInt::from_factors(vec![(2, 0)]).is_err());
        let f = FactoredInt::from_factors(vec![(2, 2), (3, 1)]).unwrap();
        assert_eq!(f.n(), 12);
    }
}
