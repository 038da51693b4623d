//! Ordered factorizations ("factorisatio numerorum").
//!
//! `f(n)` counts the ordered tuples of integers `>= 2` whose product is `n`
//! (with `f(1) = 1`), and `f_k(n)` counts those of length exactly `k`. All
//! tables are filled by harmonic sweeps over multiples, so a full build over
//! `1..=N` costs `O(N log N)` for `f`, `f_even`, `f_odd` and
//! `O(N log N log log N)` for the ragged `f_k` table.

mod partition;

pub use partition::{
    d_lambda, d_lambda_bound, enumerate_partitions, PartitionMultiset, Partitions,
    MAX_PARTITION_ELL,
};

use serde::Serialize;

use crate::arith::{iterated_log, FactoredInt, SieveTables};
use crate::error::{Error, Result};

/// How much of the `f_k` table to materialize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FkDepth {
    /// No `f_k` table; only `f`, `f_even` and `f_odd`.
    Skip,
    /// `f_k(n)` for every `k <= Ω(n)`.
    Full,
    /// `f_k(n)` for `k <= min(Ω(n), K)`.
    Truncated(u32),
}

#[derive(Debug, Clone)]
pub struct FactorisationTables {
    limit: usize,
    f: Vec<u64>,
    f_even: Vec<u64>,
    f_odd: Vec<u64>,
    fk: Option<RaggedFk>,
}

/// `f_k(n)` for `1 <= k <= depth(n)`, rows packed back to back.
#[derive(Debug, Clone)]
struct RaggedFk {
    offsets: Vec<usize>,
    values: Vec<u64>,
    omega: Vec<u8>,
    truncated: bool,
}

impl RaggedFk {
    fn row(&self, n: usize) -> &[u64] {
        &self.values[self.offsets[n]..self.offsets[n + 1]]
    }
}

fn add_count(acc: &mut u64, v: u64, what: &'static str) -> Result<()> {
    *acc = acc.checked_add(v).ok_or(Error::Overflow(what))?;
    Ok(())
}

impl FactorisationTables {
    pub fn build(limit: usize, depth: FkDepth, sieve: &SieveTables) -> Result<Self> {
        if limit < 1 {
            return Err(Error::out_of_range("limit", 0, ">= 1"));
        }
        if limit > sieve.limit() {
            return Err(Error::Capacity {
                what: "factorisation limit above sieve limit",
                requested: limit as u128,
                maximum: sieve.limit() as u128,
            });
        }
        let n = limit;

        let mut f = vec![0u64; n + 1];
        f[1] = 1;
        for j in 1..=n {
            let v = f[j];
            for m in (2 * j..=n).step_by(j) {
                add_count(&mut f[m], v, "f(n)")?;
            }
        }

        // A tuple of odd length is a first factor followed by an even-length
        // tuple (possibly empty), and vice versa.
        let mut f_even = vec![0u64; n + 1];
        let mut f_odd = vec![0u64; n + 1];
        f_even[1] = 1;
        for j in 1..=n {
            let (e, o) = (f_even[j], f_odd[j]);
            for m in (2 * j..=n).step_by(j) {
                add_count(&mut f_odd[m], e, "f_odd(n)")?;
                add_count(&mut f_even[m], o, "f_even(n)")?;
            }
        }

        let fk = match depth {
            FkDepth::Skip => None,
            FkDepth::Full => Some(build_fk(n, None, sieve)?),
            FkDepth::Truncated(k) => Some(build_fk(n, Some(k), sieve)?),
        };

        Ok(FactorisationTables {
            limit,
            f,
            f_even,
            f_odd,
            fk,
        })
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    fn check(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.limit {
            Err(Error::out_of_range("n", n as i128, format!("1..={}", self.limit)))
        } else {
            Ok(())
        }
    }

    pub fn f(&self, n: usize) -> Result<u64> {
        self.check(n)?;
        Ok(self.f[n])
    }

    pub fn f_even(&self, n: usize) -> Result<u64> {
        self.check(n)?;
        Ok(self.f_even[n])
    }

    pub fn f_odd(&self, n: usize) -> Result<u64> {
        self.check(n)?;
        Ok(self.f_odd[n])
    }

    /// `f_k(n)`. Zero when `k > Ω(n)`; an error when the table was skipped
    /// or truncated below `k` while `k <= Ω(n)`.
    pub fn fk(&self, n: usize, k: u32) -> Result<u64> {
        self.check(n)?;
        let table = self
            .fk
            .as_ref()
            .ok_or_else(|| Error::Domain("f_k table was not built".into()))?;
        if k == 0 {
            return Ok(u64::from(n == 1));
        }
        let row = table.row(n);
        if (k as usize) <= row.len() {
            return Ok(row[k as usize - 1]);
        }
        if k <= table.omega[n] as u32 {
            return Err(Error::Domain(format!(
                "f_k table truncated at k = {}",
                row.len()
            )));
        }
        Ok(0)
    }

    /// The stored `f_k(n)` row, `k = 1..`.
    pub fn fk_row(&self, n: usize) -> Result<&[u64]> {
        self.check(n)?;
        self.fk
            .as_ref()
            .map(|t| t.row(n))
            .ok_or_else(|| Error::Domain("f_k table was not built".into()))
    }

    /// Whether some `f_k(n)` with `k <= Ω(n)` was dropped by truncation.
    pub fn is_truncated(&self) -> bool {
        self.fk.as_ref().is_some_and(|t| t.truncated)
    }

    pub fn f_slice(&self) -> &[u64] {
        &self.f
    }

    /// `f_even(n) - f_odd(n)`, which is μ(n).
    pub fn mu_via_parity(&self, n: usize) -> Result<i64> {
        self.check(n)?;
        Ok(self.f_even[n] as i64 - self.f_odd[n] as i64)
    }

    /// `Σ_{n <= x} f(n)`.
    pub fn f_summatory(&self, x: usize) -> Result<u128> {
        self.check(x)?;
        Ok(self.f[1..=x].iter().map(|&v| v as u128).sum())
    }
}

fn build_fk(n: usize, k_max: Option<u32>, sieve: &SieveTables) -> Result<RaggedFk> {
    let omega = sieve.big_omega_slice();
    let depth = |m: usize| -> usize {
        let w = omega[m] as usize;
        match k_max {
            Some(k) => w.min(k as usize),
            None => w,
        }
    };
    let mut offsets = Vec::with_capacity(n + 2);
    offsets.push(0);
    offsets.push(0); // index 0
    let mut total = 0usize;
    for m in 1..=n {
        total += depth(m);
        offsets.push(total);
    }
    let mut values = vec![0u64; total];
    for m in 2..=n {
        if depth(m) >= 1 {
            values[offsets[m]] = 1;
        }
    }
    for j in 2..=n {
        let dj = depth(j);
        if dj == 0 {
            continue;
        }
        let (js, je) = (offsets[j], offsets[j + 1]);
        for m in (2 * j..=n).step_by(j) {
            let dm = offsets[m + 1] - offsets[m];
            let base = offsets[m];
            // f_{k+1}(m) += f_k(j)
            let upto = dj.min(dm.saturating_sub(1));
            for k in 0..upto {
                let v = values[js + k];
                debug_assert!(js + k < je);
                add_count(&mut values[base + k + 1], v, "f_k(n)")?;
            }
        }
    }
    let truncated = match k_max {
        Some(k) => (1..=n).any(|m| omega[m] as u32 > k),
        None => false,
    };
    Ok(RaggedFk {
        offsets,
        values,
        omega: omega[..=n].to_vec(),
        truncated,
    })
}

/// `[f_1(n), …, f_Ω(n)(n)]` from the exponent signature of n alone, by
/// dynamic programming over the divisor lattice.
pub fn ordered_factorization_profile(n: &FactoredInt) -> Result<Vec<u64>> {
    let exps = n.exponents();
    let omega = n.big_omega() as usize;
    let radices: Vec<usize> = exps.iter().map(|&e| e as usize + 1).collect();
    let size: usize = radices.iter().product();
    let decode = |mut idx: usize| -> Vec<usize> {
        radices
            .iter()
            .map(|&r| {
                let d = idx % r;
                idx /= r;
                d
            })
            .collect()
    };
    let encode = |v: &[usize]| -> usize {
        v.iter()
            .zip(&radices)
            .rev()
            .fold(0usize, |acc, (&d, &r)| acc * r + d)
    };
    let vectors: Vec<Vec<usize>> = (0..size).map(decode).collect();

    // prev[idx] = f_{k-1}(divisor idx); start from f_0 = I
    let mut prev = vec![0u64; size];
    prev[0] = 1;
    let mut out = Vec::with_capacity(omega);
    for _ in 1..=omega {
        let mut cur = vec![0u64; size];
        for (idx, v) in vectors.iter().enumerate() {
            if idx == 0 {
                continue;
            }
            // sum over proper "remainders" r < v (so the first factor v - r > 1)
            let mut acc = 0u64;
            for (ridx, r) in vectors.iter().enumerate() {
                if ridx == idx || prev[ridx] == 0 {
                    continue;
                }
                if r.iter().zip(v).all(|(a, b)| a <= b) {
                    add_count(&mut acc, prev[ridx], "f_k(n)")?;
                }
            }
            cur[idx] = acc;
        }
        out.push(cur[encode(&vectors[size - 1])]);
        prev = cur;
    }
    Ok(out)
}

/// Result of fitting the implied constant in the `exp(ℓ log ℓ + c ℓ log₂ℓ log₃ℓ)`
/// bound on `f(n)`, with `ℓ = Ω(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthConstantFit {
    /// Smallest `c` for which the bound holds on the scanned range (fitted).
    pub fitted_c: f64,
    /// Where the maximum was attained.
    pub argmax_n: usize,
    pub limit: usize,
}

/// Scans `2 <= n <= limit` and returns the smallest `c` with
/// `log f(n) <= ℓ log ℓ + c·ℓ·log₂ℓ·log₃ℓ` everywhere.
pub fn fit_growth_constant(
    tables: &FactorisationTables,
    sieve: &SieveTables,
) -> Result<GrowthConstantFit> {
    let mut best = f64::NEG_INFINITY;
    let mut argmax = 2usize;
    for n in 2..=tables.limit() {
        let ell = sieve.big_omega(n)? as f64;
        let lhs = (tables.f[n] as f64).ln() - ell * ell.ln();
        let scale = ell * iterated_log(ell, 2) * iterated_log(ell, 3);
        let c = lhs / scale;
        if c > best {
            best = c;
            argmax = n;
        }
    }
    Ok(GrowthConstantFit {
        fitted_c: best,
        argmax_n: argmax,
        limit: tables.limit(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tables(n: usize) -> (SieveTables, FactorisationTables) {
        let s = SieveTables::build(n.max(2)).unwrap();
        let t = FactorisationTables::build(n, FkDepth::Full, &s).unwrap();
        (s, t)
    }

    #[test]
    fn small_values() {
        let (_, t) = tables(100);
        assert_eq!(t.f(1).unwrap(), 1);
        assert_eq!(t.f(12).unwrap(), 8);
        assert_eq!(t.fk(12, 2).unwrap(), 4);
        assert_eq!(t.f(30).unwrap(), 13);
        assert_eq!(t.f_even(12).unwrap(), 4);
        assert_eq!(t.f_odd(12).unwrap(), 4);
        assert_eq!(t.fk(12, 4).unwrap(), 0);
        assert_eq!(t.fk(1, 0).unwrap(), 1);
        assert_eq!(t.fk(1, 1).unwrap(), 0);
    }

    #[test]
    fn parity_gives_mobius_on_examples() {
        let (_, t) = tables(100);
        assert_eq!(t.mu_via_parity(12).unwrap(), 0);
        assert_eq!(t.mu_via_parity(1).unwrap(), 1);
        assert_eq!(t.mu_via_parity(30).unwrap(), -1);
    }

    #[test]
    fn table_invariants() {
        let (s, t) = tables(5000);
        for n in 1..=5000 {
            let row = t.fk_row(n).unwrap();
            assert_eq!(row.len() as u32, s.big_omega(n).unwrap());
            let total: u64 = row.iter().sum::<u64>() + u64::from(n == 1);
            assert_eq!(total, t.f(n).unwrap());
            assert_eq!(t.f(n).unwrap(), t.f_even(n).unwrap() + t.f_odd(n).unwrap());
        }
    }

    #[test]
    fn truncated_depth() {
        let s = SieveTables::build(100).unwrap();
        let t = FactorisationTables::build(100, FkDepth::Truncated(2), &s).unwrap();
        assert!(t.is_truncated());
        assert_eq!(t.fk(12, 2).unwrap(), 4);
        assert!(t.fk(12, 3).is_err());
        assert_eq!(t.fk(6, 3).unwrap(), 0);
        let skip = FactorisationTables::build(100, FkDepth::Skip, &s).unwrap();
        assert!(skip.fk(12, 1).is_err());
        assert_eq!(skip.f(12).unwrap(), 8);
    }

    #[test]
    fn limit_above_sieve_is_capacity_error() {
        let s = SieveTables::build(100).unwrap();
        assert!(matches!(
            FactorisationTables::build(101, FkDepth::Skip, &s),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn profile_matches_table() {
        let (s, t) = tables(3000);
        for n in 1..=3000 {
            let fi = s.factorize(n).unwrap();
            let p = ordered_factorization_profile(&fi).unwrap();
            assert_eq!(p.as_slice(), t.fk_row(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn growth_fit_is_reported() {
        let (s, t) = tables(10_000);
        let fit = fit_growth_constant(&t, &s).unwrap();
        assert!(fit.fitted_c.is_finite());
        for n in 2..=10_000 {
            let ell = s.big_omega(n).unwrap() as f64;
            let rhs = ell * ell.ln()
                + fit.fitted_c * ell * iterated_log(ell, 2) * iterated_log(ell, 3);
            assert!((t.f(n).unwrap() as f64).ln() <= rhs + 1e-12);
        }
    }
}
