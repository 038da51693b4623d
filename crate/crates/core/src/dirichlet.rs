//! Truncated arithmetic functions and their Dirichlet algebra.
//!
//! An [`ArithFn`] holds `F(1), …, F(N)`. Convolution and inversion only ever
//! need values at divisors, so truncation at `N` is exact for every index
//! `<= N`. Coefficients are either `i128` (exact, overflow checked) or
//! `Complex64`.

use std::fmt::Debug;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, FactoredInt};
use crate::error::{Error, Result};

/// Coefficient ring for [`ArithFn`].
pub trait Scalar: Clone + Debug + PartialEq + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn checked_add(&self, other: &Self) -> Option<Self>;
    fn checked_mul(&self, other: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Multiplicative inverse, when it exists in the ring.
    fn recip(&self) -> Option<Self>;
    /// `self / d` when the division is exact in the ring.
    fn div_exact(&self, d: u64) -> Option<Self>;
    fn to_complex(&self) -> Complex64;

    /// `self + a * b`.
    fn mul_add(&self, a: &Self, b: &Self) -> Option<Self> {
        self.checked_add(&a.checked_mul(b)?)
    }

    fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.checked_add(&other.neg()?)
    }

    fn checked_pow(&self, e: u32) -> Option<Self> {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.checked_mul(self)?;
        }
        Some(acc)
    }
}

impl Scalar for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        i128::checked_add(*self, *other)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        i128::checked_mul(*self, *other)
    }
    fn neg(&self) -> Option<Self> {
        i128::checked_neg(*self)
    }
    fn recip(&self) -> Option<Self> {
        matches!(*self, 1 | -1).then_some(*self)
    }
    fn div_exact(&self, d: u64) -> Option<Self> {
        let d = d as i128;
        (d != 0 && self % d == 0).then(|| self / d)
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self as f64, 0.0)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn recip(&self) -> Option<Self> {
        (!Scalar::is_zero(self)).then(|| self.inv())
    }
    fn div_exact(&self, d: u64) -> Option<Self> {
        (d != 0).then(|| self / d as f64)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}

/// A point `s = σ + it`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub sigma: f64,
    pub t: f64,
}

impl ComplexPoint {
    pub fn new(sigma: f64, t: f64) -> Self {
        ComplexPoint { sigma, t }
    }

    pub fn real(sigma: f64) -> Self {
        ComplexPoint { sigma, t: 0.0 }
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }
}

/// `F(1), …, F(N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArithFn<T> {
    values: Vec<T>,
}

impl<T: Scalar> ArithFn<T> {
    /// Takes `values[i] = F(i + 1)`.
    pub fn from_values(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::out_of_range("limit", 0, ">= 1"));
        }
        Ok(ArithFn { values })
    }

    pub fn from_fn(limit: usize, mut f: impl FnMut(usize) -> T) -> Result<Self> {
        Self::from_values((1..=limit).map(&mut f).collect())
    }

    /// The unit `I`.
    pub fn unit(limit: usize) -> Result<Self> {
        Self::from_fn(limit, |n| if n == 1 { T::one() } else { T::zero() })
    }

    /// The constant function 1.
    pub fn ones(limit: usize) -> Result<Self> {
        Self::from_fn(limit, |_| T::one())
    }

    pub fn limit(&self) -> usize {
        self.values.len()
    }

    /// `F(n)` for `1 <= n <= N`.
    ///
    /// # Panics
    /// On an index outside `1..=N`.
    pub fn at(&self, n: usize) -> &T {
        &self.values[n - 1]
    }

    pub fn get(&self, n: usize) -> Option<&T> {
        n.checked_sub(1).and_then(|i| self.values.get(i))
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn to_complex(&self) -> ArithFn<Complex64> {
        ArithFn {
            values: self.values.iter().map(Scalar::to_complex).collect(),
        }
    }

    /// Same function truncated to a smaller limit.
    pub fn truncate(&self, limit: usize) -> Result<Self> {
        if limit == 0 || limit > self.limit() {
            return Err(Error::out_of_range(
                "limit",
                limit as i128,
                format!("1..={}", self.limit()),
            ));
        }
        Ok(ArithFn {
            values: self.values[..limit].to_vec(),
        })
    }

    /// Pointwise product with the indicator of `keep`.
    pub fn restrict_support(&self, mut keep: impl FnMut(usize) -> bool) -> Self {
        ArithFn {
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| if keep(i + 1) { v.clone() } else { T::zero() })
                .collect(),
        }
    }

    /// `Σ_{n <= x} F(n)`.
    pub fn summatory(&self, x: usize) -> Result<T> {
        if x > self.limit() {
            return Err(Error::out_of_range(
                "x",
                x as i128,
                format!("0..={}", self.limit()),
            ));
        }
        let mut acc = T::zero();
        for v in &self.values[..x] {
            acc = acc.checked_add(v).ok_or(Error::Overflow("summatory"))?;
        }
        Ok(acc)
    }

    /// Truncated Dirichlet series `Σ_{n <= N} F(n) n^{-s}`.
    pub fn series_eval(&self, s: ComplexPoint) -> Complex64 {
        let s = s.as_complex();
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| v.to_complex() * (-s * ((i + 1) as f64).ln()).exp())
            .sum()
    }
}

/// `(F * G)(n) = Σ_{ab = n} F(a) G(b)`.
pub fn convolve<T: Scalar>(f: &ArithFn<T>, g: &ArithFn<T>) -> Result<ArithFn<T>> {
    if f.limit() != g.limit() {
        return Err(Error::LimitMismatch {
            left: f.limit(),
            right: g.limit(),
        });
    }
    let n = f.limit();
    let mut h = vec![T::zero(); n];
    for a in 1..=n {
        let fa = f.at(a);
        if fa.is_zero() {
            continue;
        }
        for b in 1..=n / a {
            let slot = &mut h[a * b - 1];
            *slot = slot
                .mul_add(fa, g.at(b))
                .ok_or(Error::Overflow("convolution"))?;
        }
    }
    ArithFn::from_values(h)
}

/// Dirichlet inverse by forward substitution:
/// `F̃(1) = 1/F(1)` and `F̃(n) = -F̃(1) Σ_{d | n, d > 1} F(d) F̃(n/d)`.
pub fn dirichlet_inverse<T: Scalar>(f: &ArithFn<T>) -> Result<ArithFn<T>> {
    let n = f.limit();
    let inv1 = f
        .at(1)
        .recip()
        .ok_or_else(|| Error::Domain(format!("F(1) = {:?} is not invertible", f.at(1))))?;
    let neg_inv1 = inv1.neg().ok_or(Error::Overflow("inverse"))?;
    // acc[m] collects Σ_{d | m, d > 1} F(d) F̃(m/d) as the sweep passes m/d
    let mut acc = vec![T::zero(); n];
    let mut out = vec![T::zero(); n];
    out[0] = inv1;
    for j in 1..=n {
        if j > 1 {
            out[j - 1] = neg_inv1
                .checked_mul(&acc[j - 1])
                .ok_or(Error::Overflow("inverse"))?;
        }
        let v = out[j - 1].clone();
        if v.is_zero() {
            continue;
        }
        for d in 2..=n / j {
            let slot = &mut acc[j * d - 1];
            *slot = slot
                .mul_add(f.at(d), &v)
                .ok_or(Error::Overflow("inverse"))?;
        }
    }
    ArithFn::from_values(out)
}

/// `[f_1(F; n), …, f_Ω(n)(F; n)]` where
/// `f_k(F; n) = Σ_{(n_1..n_k) ∈ T_k(n)} F(n_1)⋯F(n_k)`, by dynamic
/// programming over the divisors of n.
pub fn fk_f_profile<T: Scalar>(f: &ArithFn<T>, n: usize) -> Result<Vec<T>> {
    if n == 0 || n > f.limit() {
        return Err(Error::out_of_range(
            "n",
            n as i128,
            format!("1..={}", f.limit()),
        ));
    }
    let omega = FactoredInt::by_trial_division(n as u64)?.big_omega() as usize;
    let divs = divisors(n as u64);
    // prev[i] = f_{k-1}(F; divs[i])
    let mut prev: Vec<T> = divs
        .iter()
        .map(|&d| if d == 1 { T::one() } else { T::zero() })
        .collect();
    let mut out = Vec::with_capacity(omega);
    for _ in 0..omega {
        let mut cur = vec![T::zero(); divs.len()];
        for (i, &m) in divs.iter().enumerate() {
            let mut acc = T::zero();
            for (j, &r) in divs[..i].iter().enumerate() {
                // m = d * r with d = m / r >= 2
                if m % r == 0 && !prev[j].is_zero() {
                    let d = (m / r) as usize;
                    acc = acc
                        .mul_add(f.at(d), &prev[j])
                        .ok_or(Error::Overflow("f_k(F; n)"))?;
                }
            }
            cur[i] = acc;
        }
        out.push(cur[divs.len() - 1].clone());
        prev = cur;
    }
    Ok(out)
}

/// `f_k(F; n)`; zero for `k > Ω(n)`, and `I(n)` for `k = 0`.
pub fn fk_f<T: Scalar>(f: &ArithFn<T>, n: usize, k: usize) -> Result<T> {
    if k == 0 {
        return Ok(if n == 1 { T::one() } else { T::zero() });
    }
    let profile = fk_f_profile(f, n)?;
    Ok(profile.get(k - 1).cloned().unwrap_or_else(T::zero))
}

/// `F̃(n) = I(n) + Σ_{k >= 1} (-1)^k f_k(F; n)`, evaluated for every
/// `n <= limit`. `F` is rescaled to `F(1) = 1` first and the scale undone on
/// the result.
pub fn inverse_via_alternating<T: Scalar>(f: &ArithFn<T>, limit: usize) -> Result<ArithFn<T>> {
    if limit == 0 || limit > f.limit() {
        return Err(Error::out_of_range(
            "limit",
            limit as i128,
            format!("1..={}", f.limit()),
        ));
    }
    let c = f.at(1).clone();
    let c_inv = c
        .recip()
        .ok_or_else(|| Error::Domain(format!("F(1) = {c:?} cannot be normalized to 1")))?;
    // G = F / F(1) has G(1) = 1 and G̃ = F(1) F̃
    let g = ArithFn::from_values(
        f.values()[..limit]
            .iter()
            .map(|v| v.checked_mul(&c_inv).ok_or(Error::Overflow("normalize")))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let mut out = Vec::with_capacity(limit);
    for n in 1..=limit {
        let mut acc = if n == 1 { T::one() } else { T::zero() };
        for (k, term) in fk_f_profile(&g, n)?.iter().enumerate() {
            acc = if (k + 1) % 2 == 0 {
                acc.checked_add(term)
            } else {
                acc.checked_sub(term)
            }
            .ok_or(Error::Overflow("alternating sum"))?;
        }
        out.push(acc.checked_mul(&c_inv).ok_or(Error::Overflow("rescale"))?);
    }
    ArithFn::from_values(out)
}
