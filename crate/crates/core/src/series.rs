//! Riemann zeta on the real axis, the Kalmár constant and the summatory
//! checks built on top of it.

use serde::{Deserialize, Serialize};

use crate::arith::SieveTables;
use crate::error::{Error, Result};
use crate::factorisatio::FactorisationTables;

/// Closest approach to the pole at 1 that [`zeta_real`] accepts.
pub const MIN_SIGMA: f64 = 1.0 + 1e-6;

// B_2, B_4, …, B_10 divided by (2j)!
const BERNOULLI_OVER_FACTORIAL: [f64; 5] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
];

/// Euler–Maclaurin correction terms kept; the fifth bounds the remainder.
const CORRECTION_TERMS: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaReal {
    pub sigma: f64,
    pub value: f64,
    pub derivative: f64,
    pub method: String,
    /// Bound on `|ζ(σ) - value|`.
    pub error_bound: f64,
    /// Heuristic bound on the derivative error (derivative of the first
    /// omitted term).
    pub derivative_error: f64,
    pub terms: usize,
}

/// `j`-th Euler–Maclaurin term (1-based) and its σ-derivative at cutoff `n`.
fn em_term(sigma: f64, n: f64, j: usize) -> (f64, f64) {
    let mut poly = 1.0;
    let mut dlog = 0.0;
    for i in 0..(2 * j - 1) {
        poly *= sigma + i as f64;
        dlog += 1.0 / (sigma + i as f64);
    }
    let power = n.powf(-sigma - 2.0 * j as f64 + 1.0);
    let t = BERNOULLI_OVER_FACTORIAL[j - 1] * poly * power;
    (t, t * (dlog - n.ln()))
}

/// The result and the truncation part of its error bound.
fn zeta_with_cutoff(sigma: f64, cutoff: usize) -> (ZetaReal, f64) {
    let n = cutoff as f64;
    let mut value = 0.0;
    let mut deriv = 0.0;
    // small terms first
    for k in (1..cutoff).rev() {
        let kf = k as f64;
        let t = kf.powf(-sigma);
        value += t;
        deriv -= kf.ln() * t;
    }
    let tail = n.powf(1.0 - sigma) / (sigma - 1.0);
    value += tail;
    deriv += -n.ln() * tail - tail / (sigma - 1.0);
    let half = 0.5 * n.powf(-sigma);
    value += half;
    deriv += -n.ln() * half;
    for j in 1..=CORRECTION_TERMS {
        let (t, dt) = em_term(sigma, n, j);
        value += t;
        deriv += dt;
    }
    let (rem, drem) = em_term(sigma, n, CORRECTION_TERMS + 1);
    // worst-case accumulation of one ulp per summand
    let rounding = 2.0 * f64::EPSILON * (cutoff as f64 + 8.0) * value.abs().max(tail);
    let z = ZetaReal {
        sigma,
        value,
        derivative: deriv,
        method: "euler-maclaurin".into(),
        error_bound: rem.abs() + rounding,
        derivative_error: 2.0 * drem.abs() + rounding * n.ln().max(1.0),
        terms: cutoff,
    };
    (z, rem.abs())
}

/// ζ(σ) and ζ′(σ) for real `σ > 1`, certified to `1e-12` or better.
pub fn zeta_real(sigma: f64) -> Result<ZetaReal> {
    if !(sigma >= MIN_SIGMA) || !sigma.is_finite() {
        return Err(Error::Domain(format!(
            "zeta_real needs sigma >= {MIN_SIGMA}, got {sigma}"
        )));
    }
    let mut cutoff = 16usize;
    loop {
        let (z, truncation) = zeta_with_cutoff(sigma, cutoff);
        let rounding = z.error_bound - truncation;
        // past the point where rounding dominates, more terms only hurt
        if truncation <= 1e-14 * z.value.max(1.0) || truncation <= rounding || cutoff >= 1 << 16 {
            return Ok(z);
        }
        cutoff *= 2;
    }
}

pub fn zeta_prime_real(sigma: f64) -> Result<f64> {
    Ok(zeta_real(sigma)?.derivative)
}

/// The σ > 1 with ζ(σ) = target, for target > 1.
pub fn zeta_inverse(target: f64) -> Result<f64> {
    if !(target > 1.0) || !target.is_finite() {
        return Err(Error::Domain(format!("no σ > 1 has ζ(σ) = {target}")));
    }
    // ζ(σ) > 1/(σ-1), so ζ(lo) > target
    let lo_start = 1.0 + 1.0 / target;
    if lo_start < MIN_SIGMA {
        return Err(Error::Domain(format!(
            "root of ζ(σ) = {target} lies closer to 1 than {MIN_SIGMA}"
        )));
    }
    let mut lo = lo_start;
    let mut hi = 2.0f64.max(lo + 1.0);
    let mut guard = 0;
    while zeta_real(hi)?.value > target {
        lo = hi;
        hi *= 2.0;
        guard += 1;
        if guard > 60 {
            return Err(Error::Domain(format!("ζ(σ) = {target} is too close to 1")));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if zeta_real(mid)?.value > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut root = 0.5 * (lo + hi);
    for _ in 0..3 {
        let z = zeta_real(root)?;
        let step = (z.value - target) / z.derivative;
        let next = root - step;
        if !(next > lo - 1e-9 && next < hi + 1e-9) {
            break;
        }
        root = next;
    }
    Ok(root)
}

/// The unique σ > 1 with ζ(σ) = 2.
pub fn kalmar_beta() -> Result<f64> {
    zeta_inverse(2.0)
}

/// Leading constant `-1 / (β ζ′(β))` of `Σ_{n <= x} f(n)`.
pub fn kalmar_constant() -> Result<f64> {
    let beta = kalmar_beta()?;
    Ok(-1.0 / (beta * zeta_prime_real(beta)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KalmarPoint {
    pub x: u64,
    pub summatory: u128,
    pub asymptotic: f64,
    pub ratio: f64,
}

/// `Σ_{n <= x} f(n)` against `-x^β / (β ζ′(β))`.
pub fn kalmar_ratio(tables: &FactorisationTables, x: usize) -> Result<KalmarPoint> {
    let beta = kalmar_beta()?;
    let main = kalmar_constant()? * (x as f64).powf(beta);
    let s = tables.f_summatory(x)?;
    Ok(KalmarPoint {
        x: x as u64,
        summatory: s,
        asymptotic: main,
        ratio: s as f64 / main,
    })
}

/// Which function μ is correlated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Xi {
    /// ξ(n) = f(n)
    F,
    /// ξ(n) = f(n) μ(n)²
    FMu2,
}

impl std::str::FromStr for Xi {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f" => Ok(Xi::F),
            "fmu2" => Ok(Xi::FMu2),
            other => Err(Error::Parse(format!("unknown xi selector {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SarnakReport {
    pub x: u64,
    pub xi: Xi,
    /// `Σ_{n <= x} μ(n) ξ(n)`
    pub numerator: i128,
    /// `Σ_{n <= x} |ξ(n)|`
    pub denominator: u128,
    pub ratio: f64,
}

pub fn sarnak_correlation(
    tables: &FactorisationTables,
    sieve: &SieveTables,
    x: usize,
    xi: Xi,
) -> Result<SarnakReport> {
    if x == 0 || x > tables.limit() || x > sieve.limit() {
        return Err(Error::out_of_range(
            "x",
            x as i128,
            format!("1..={}", tables.limit().min(sieve.limit())),
        ));
    }
    let f = tables.f_slice();
    let mu = sieve.mu_slice();
    let mut num: i128 = 0;
    let mut den: u128 = 0;
    for n in 1..=x {
        let weight = match xi {
            Xi::F => f[n] as i128,
            Xi::FMu2 => (mu[n] as i128).pow(2) * f[n] as i128,
        };
        num += mu[n] as i128 * weight;
        den += weight.unsigned_abs();
    }
    Ok(SarnakReport {
        x: x as u64,
        xi,
        numerator: num,
        denominator: den,
        ratio: num as f64 / den as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorisatio::FkDepth;
    use std::f64::consts::PI;

    #[test]
    fn classical_values() {
        let z2 = zeta_real(2.0).unwrap();
        assert!((z2.value - PI * PI / 6.0).abs() < 1e-14);
        assert!(z2.error_bound <= 1e-12, "{z2:?}");
        let z3 = zeta_real(3.0).unwrap();
        assert!((z3.value - 1.202_056_903_159_594_3).abs() < 1e-14);
        let z4 = zeta_real(4.0).unwrap();
        assert!((z4.value - PI.powi(4) / 90.0).abs() < 1e-14);
        // ζ′(2) = -0.937548254315843753702574…
        assert!((z2.derivative - (-0.937_548_254_315_843_8)).abs() < 1e-12);
    }

    #[test]
    fn derivative_is_negative() {
        for s in [1.5, 2.0, 3.0] {
            let z = zeta_real(s).unwrap();
            assert!(z.derivative < 0.0);
            assert!(z.value > 1.0);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for s in [1.2, 1.7, 2.5, 6.0] {
            let h = 1e-5;
            let fd = (zeta_real(s + h).unwrap().value - zeta_real(s - h).unwrap().value) / (2.0 * h);
            let d = zeta_prime_real(s).unwrap();
            assert!((fd - d).abs() < 1e-7 * d.abs().max(1.0), "σ = {s}");
        }
    }

    #[test]
    fn rejects_sigma_near_pole() {
        assert!(zeta_real(1.0).is_err());
        assert!(zeta_real(0.5).is_err());
        assert!(zeta_real(f64::NAN).is_err());
        assert!(zeta_real(1.0 + 1e-5).is_ok());
    }

    #[test]
    fn tail_bound_is_honest() {
        for s in [1.5, 2.0, 3.5] {
            let (coarse, _) = zeta_with_cutoff(s, 16);
            let (fine, _) = zeta_with_cutoff(s, 160);
            assert!((coarse.value - fine.value).abs() <= coarse.error_bound + fine.error_bound);
        }
    }

    #[test]
    fn kalmar_root() {
        let beta = kalmar_beta().unwrap();
        assert_eq!(format!("{beta:.6}"), "1.728647");
        assert!((zeta_real(beta).unwrap().value - 2.0).abs() <= 1e-12);
        assert!(kalmar_constant().unwrap() > 0.0);
    }

    #[test]
    fn zeta_inverse_is_monotone() {
        let a = zeta_inverse(1.5).unwrap();
        let b = zeta_inverse(1.1).unwrap();
        let c = zeta_inverse(1.001).unwrap();
        assert!(a < b && b < c);
        assert!(zeta_inverse(1.0).is_err());
        assert!(zeta_inverse(1e9).is_err());
    }

    #[test]
    fn sarnak_small() {
        let s = SieveTables::build(100).unwrap();
        let t = FactorisationTables::build(100, FkDepth::Skip, &s).unwrap();
        let r = sarnak_correlation(&t, &s, 10, Xi::F).unwrap();
        assert_eq!(r.numerator, 3);
        assert_eq!(r.denominator, (1..=10).map(|n| t.f(n).unwrap() as u128).sum());
        let r2 = sarnak_correlation(&t, &s, 10, Xi::FMu2).unwrap();
        assert_eq!(r2.numerator, 3);
        assert_eq!(r2.denominator, 11);
    }

    #[test]
    fn kalmar_ratio_positive() {
        let s = SieveTables::build(1000).unwrap();
        let t = FactorisationTables::build(1000, FkDepth::Skip, &s).unwrap();
        for x in [1, 10, 100, 1000] {
            assert!(kalmar_ratio(&t, x).unwrap().ratio > 0.0);
        }
    }
}
