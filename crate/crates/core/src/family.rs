//! The one-parameter family built from `F_z` (1 at n = 1, `-z` elsewhere).
//!
//! For each z the context caches `F_z`, its inverse `F̃_z`, and `G_z`, the
//! inverse of `F̃_z μ²`. Their Dirichlet series are `1 - z(ζ(s) - 1)`,
//! its reciprocal, `D_z†` and `D_z` respectively. z = -1 gives ζ itself
//! and z = 0 the constant 1.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{is_prime_trial, FactoredInt, SieveTables};
use crate::dirichlet::{dirichlet_inverse, ArithFn, ComplexPoint, Scalar};
use crate::error::{Error, Result};
use crate::factorisatio::ordered_factorization_profile;
use crate::series::{kalmar_beta, zeta_inverse};

#[derive(Debug, Clone)]
pub struct ZFamilyContext<T: Scalar> {
    z: T,
    fz: ArithFn<T>,
    fz_tilde: ArithFn<T>,
    gz: ArithFn<T>,
    beta_z: f64,
}

impl<T: Scalar> ZFamilyContext<T> {
    pub fn build(z: T, limit: usize) -> Result<Self> {
        let sieve = SieveTables::build(limit.max(2))?;
        Self::with_sieve(z, limit, &sieve)
    }

    pub fn with_sieve(z: T, limit: usize, sieve: &SieveTables) -> Result<Self> {
        if limit > sieve.limit() {
            return Err(Error::Capacity {
                what: "family limit above sieve limit",
                requested: limit as u128,
                maximum: sieve.limit() as u128,
            });
        }
        let neg_z = z.neg().ok_or(Error::Overflow("-z"))?;
        let fz = ArithFn::from_fn(limit, |n| if n == 1 { T::one() } else { neg_z.clone() })?;
        let fz_tilde = dirichlet_inverse(&fz)?;
        let mu = sieve.mu_slice();
        let squarefree_part = fz_tilde.restrict_support(|n| mu[n] != 0);
        let gz = dirichlet_inverse(&squarefree_part)?;
        let beta_z = beta_z(z.to_complex().norm())?;
        Ok(ZFamilyContext {
            z,
            fz,
            fz_tilde,
            gz,
            beta_z,
        })
    }

    pub fn z(&self) -> &T {
        &self.z
    }

    pub fn limit(&self) -> usize {
        self.fz.limit()
    }

    pub fn fz(&self) -> &ArithFn<T> {
        &self.fz
    }

    pub fn fz_tilde(&self) -> &ArithFn<T> {
        &self.fz_tilde
    }

    pub fn gz(&self) -> &ArithFn<T> {
        &self.gz
    }

    /// `β_z`, or `-∞` for z = 0.
    pub fn beta_z(&self) -> f64 {
        self.beta_z
    }

    /// Truncated `D_z†(s) = Σ F̃_z(n) μ(n)² n^{-s}`.
    pub fn d_dagger(&self, sieve: &SieveTables, s: ComplexPoint) -> Complex64 {
        let mu = sieve.mu_slice();
        self.fz_tilde.restrict_support(|n| mu[n] != 0).series_eval(s)
    }

    /// Truncated `D_z(s) = Σ G_z(n) n^{-s}`.
    pub fn d_z(&self, s: ComplexPoint) -> Complex64 {
        self.gz.series_eval(s)
    }

    /// If `G_z` were multiplicative then `G_z(2) G_z(3) = G_z(6)`.
    pub fn non_multiplicativity_witness(&self) -> Result<Witness<T>> {
        if self.limit() < 6 {
            return Err(Error::out_of_range("limit", self.limit() as i128, ">= 6"));
        }
        let (g2, g3, g6) = (
            self.gz.at(2).clone(),
            self.gz.at(3).clone(),
            self.gz.at(6).clone(),
        );
        let discrepancy = g2
            .checked_mul(&g3)
            .and_then(|p| p.checked_sub(&g6))
            .ok_or(Error::Overflow("witness"))?;
        Ok(Witness {
            g2,
            g3,
            g6,
            discrepancy,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness<T> {
    pub g2: T,
    pub g3: T,
    pub g6: T,
    /// `G_z(2) G_z(3) - G_z(6)`
    pub discrepancy: T,
}

/// The σ > 1 with `ζ(σ) = 1 + 1/|z|`; `-∞` when z = 0.
pub fn beta_z(abs_z: f64) -> Result<f64> {
    if abs_z == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    zeta_inverse(1.0 + 1.0 / abs_z)
}

/// `B = max(0, log|z| / log 2)`, the extra growth exponent of `F̃_z`.
pub fn growth_offset(abs_z: f64) -> f64 {
    if abs_z <= 1.0 {
        0.0
    } else {
        abs_z.ln() / 2f64.ln()
    }
}

/// Largest `|F̃_z(n)| / n^{B + β}` over `1 <= n <= N` (a fitted constant).
pub fn fit_tilde_growth<T: Scalar>(ctx: &ZFamilyContext<T>) -> Result<(f64, usize)> {
    let exponent = growth_offset(ctx.z.to_complex().norm()) + kalmar_beta()?;
    let mut best = 0.0;
    let mut argmax = 1;
    for n in 1..=ctx.limit() {
        let c = ctx.fz_tilde.at(n).to_complex().norm() / (n as f64).powf(exponent);
        if c > best {
            best = c;
            argmax = n;
        }
    }
    Ok((best, argmax))
}

/// Both sides of `Σ F̃_z(n) n^{-s} = 1 / (1 - z(ζ(s) - 1))` with ζ replaced
/// by its own truncation at the same N.
pub fn reciprocal_identity_sides<T: Scalar>(
    ctx: &ZFamilyContext<T>,
    s: ComplexPoint,
) -> Result<(Complex64, Complex64)> {
    let lhs = ctx.fz_tilde.series_eval(s);
    let zeta_trunc = ArithFn::<Complex64>::ones(ctx.limit())?.series_eval(s);
    let one = Complex64::new(1.0, 0.0);
    let rhs = one / (one - ctx.z.to_complex() * (zeta_trunc - one));
    Ok((lhs, rhs))
}

/// Exact binomial coefficient; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn binomial_scalar<T: Scalar>(n: i64, k: i64) -> Result<T> {
    let b = binomial(n, k);
    let v: i64 = b.try_into().map_err(|_| Error::Overflow("binomial"))?;
    Ok(T::from_i64(v))
}

fn check_alpha_p(alpha: u32, n: &FactoredInt, p: u64) -> Result<()> {
    if alpha == 0 {
        return Err(Error::out_of_range("alpha", 0, ">= 1"));
    }
    if !is_prime_trial(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if n.is_divisible_by(p) {
        return Err(Error::Domain(format!("{p} divides {}", n.n())));
    }
    Ok(())
}

/// `f_ℓ(n)` for `ℓ = 0..=Ω(n)`, with `f_0 = I`.
fn fl_with_zero(n: &FactoredInt) -> Result<Vec<u64>> {
    let mut out = vec![u64::from(n.n() == 1)];
    out.extend(ordered_factorization_profile(n)?);
    Ok(out)
}

/// Closed form for `F̃_z(p^α n)` with `p ∤ n`:
/// `(z+1)^{α-1} Σ_ℓ z^ℓ (z + ℓ α^{-1} (z+1)) C(α+ℓ-1, ℓ) f_ℓ(n)`.
///
/// The sum runs over `ℓ >= 0` with `f_0 = I`, so that n = 1 yields
/// `z (z+1)^{α-1}`; for `n >= 2` the ℓ = 0 term vanishes.
pub fn prime_power_closed_form<T: Scalar>(
    z: &T,
    alpha: u32,
    n: &FactoredInt,
    p: u64,
) -> Result<T> {
    check_alpha_p(alpha, n, p)?;
    let a = alpha as i64;
    let z1 = z.checked_add(&T::one()).ok_or(Error::Overflow("z + 1"))?;
    let mut sum = T::zero();
    for (ell, &fl) in fl_with_zero(n)?.iter().enumerate() {
        if fl == 0 {
            continue;
        }
        let l = ell as i64;
        // α z + ℓ (z + 1), to be divided by α together with the binomial
        let inner = T::from_i64(a)
            .checked_mul(z)
            .and_then(|v| v.checked_add(&T::from_i64(l).checked_mul(&z1)?))
            .ok_or(Error::Overflow("closed form"))?;
        let term = z
            .checked_pow(ell as u32)
            .and_then(|v| v.checked_mul(&inner))
            .and_then(|v| v.checked_mul(&binomial_scalar::<T>(a + l - 1, l).ok()?))
            .and_then(|v| v.checked_mul(&T::from_i64(fl as i64)))
            .and_then(|v| v.div_exact(alpha as u64))
            .ok_or(Error::Overflow("closed form"))?;
        sum = sum.checked_add(&term).ok_or(Error::Overflow("closed form"))?;
    }
    z1.checked_pow(alpha - 1)
        .and_then(|v| v.checked_mul(&sum))
        .ok_or(Error::Overflow("closed form"))
}

/// `B(z, α, ℓ) = Σ_{k=0}^{α} z^k C(k+ℓ, ℓ) C(α+ℓ-1, k+ℓ-1)`.
pub fn b_sum<T: Scalar>(z: &T, alpha: u32, ell: u32) -> Result<T> {
    let (a, l) = (alpha as i64, ell as i64);
    let mut acc = T::zero();
    for k in 0..=a {
        let c = binomial(k + l, l) * binomial(a + l - 1, k + l - 1);
        let c: i64 = c.try_into().map_err(|_| Error::Overflow("B sum"))?;
        let term = z
            .checked_pow(k as u32)
            .and_then(|v| v.checked_mul(&T::from_i64(c)))
            .ok_or(Error::Overflow("B sum"))?;
        acc = acc.checked_add(&term).ok_or(Error::Overflow("B sum"))?;
    }
    Ok(acc)
}

/// `C(α+ℓ-1, ℓ) (z (z+1)^{α-1} + ℓ α^{-1} (z+1)^α)`.
pub fn b_closed<T: Scalar>(z: &T, alpha: u32, ell: u32) -> Result<T> {
    if alpha == 0 {
        return Err(Error::out_of_range("alpha", 0, ">= 1"));
    }
    let (a, l) = (alpha as i64, ell as i64);
    let z1 = z.checked_add(&T::one()).ok_or(Error::Overflow("z + 1"))?;
    let c = binomial_scalar::<T>(a + l - 1, l)?;
    let first = z1
        .checked_pow(alpha - 1)
        .and_then(|v| v.checked_mul(z))
        .and_then(|v| v.checked_mul(&c))
        .ok_or(Error::Overflow("B closed"))?;
    // ℓ C(α+ℓ-1, ℓ) / α is an integer
    let second = z1
        .checked_pow(alpha)
        .and_then(|v| v.checked_mul(&c))
        .and_then(|v| v.checked_mul(&T::from_i64(l)))
        .and_then(|v| v.div_exact(alpha as u64))
        .ok_or(Error::Overflow("B closed"))?;
    first.checked_add(&second).ok_or(Error::Overflow("B closed"))
}

/// Checks, in exact rational arithmetic,
/// `C(k+ℓ, ℓ) C(α+ℓ-1, k+ℓ-1) = C(α+ℓ-1, ℓ) (C(α-1, k-1) + (ℓ/α) C(α, k))`.
pub fn binomial_identity_check(alpha: u32, k: u32, ell: u32) -> Result<bool> {
    if alpha == 0 || k > alpha {
        return Err(Error::Domain(format!(
            "need α >= 1 and 0 <= k <= α, got α = {alpha}, k = {k}"
        )));
    }
    let (a, k, l) = (alpha as i64, k as i64, ell as i64);
    let q = |v: BigInt| BigRational::from_integer(v);
    let lhs = q(binomial(k + l, l) * binomial(a + l - 1, k + l - 1));
    let ratio = BigRational::new(BigInt::from(l), BigInt::from(a));
    let rhs = q(binomial(a + l - 1, l)) * (q(binomial(a - 1, k - 1)) + ratio * q(binomial(a, k)));
    Ok(lhs == rhs)
}

/// `f_k(p^α n) = Σ_{ℓ = max(0, k-α)}^{k} C(k, ℓ) C(α+ℓ-1, k-1) f_ℓ(n)` for
/// `p ∤ n`, with `f_0 = I`.
pub fn fk_prime_power_expansion(p: u64, alpha: u32, n: &FactoredInt, k: u32) -> Result<u128> {
    check_alpha_p(alpha, n, p)?;
    if k == 0 {
        return Ok(0);
    }
    let fl = fl_with_zero(n)?;
    let (a, k) = (alpha as i64, k as i64);
    let lo = (k - a).max(0);
    let mut acc = BigInt::zero();
    for l in lo..=k {
        let Some(&f) = fl.get(l as usize) else {
            continue;
        };
        acc += binomial(k, l) * binomial(a + l - 1, k - 1) * BigInt::from(f);
    }
    acc.try_into().map_err(|_| Error::Overflow("f_k expansion"))
}
