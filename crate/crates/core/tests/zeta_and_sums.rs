use numerorum::arith::SieveTables;
use numerorum::factorisatio::{FactorisationTables, FkDepth};
use numerorum::family::beta_z;
use numerorum::series::{
    kalmar_beta, kalmar_constant, kalmar_ratio, sarnak_correlation, zeta_prime_real, zeta_real,
    Xi,
};

/// Direct partial sum plus the integral tail and half-term, with the
/// standard `σ/(12 N^{σ+1})` remainder estimate.
fn plain_zeta(sigma: f64, n: usize) -> (f64, f64) {
    let mut sum = 0.0;
    for k in (1..n).rev() {
        sum += (k as f64).powf(-sigma);
    }
    let nf = n as f64;
    sum += nf.powf(1.0 - sigma) / (sigma - 1.0) + 0.5 * nf.powf(-sigma);
    (sum, sigma / 12.0 * nf.powf(-sigma - 1.0))
}

#[test]
fn certified_values_against_independent_sums() {
    for sigma in [1.5, 1.728, 2.0, 3.0, 5.0] {
        let z = zeta_real(sigma).unwrap();
        assert!(z.error_bound <= 1e-12);
        for n in [10_000usize, 100_000] {
            let (plain, err) = plain_zeta(sigma, n);
            assert!((plain - z.value).abs() <= err + z.error_bound + 1e-13, "σ = {sigma}, N = {n}");
        }
        assert!(z.value > 1.0 && z.derivative < 0.0);
    }
}

#[test]
fn derivative_matches_central_differences() {
    for sigma in [1.5, 2.0, 3.0] {
        let h = 1e-5;
        let fd = (zeta_real(sigma + h).unwrap().value - zeta_real(sigma - h).unwrap().value) / (2.0 * h);
        assert!((zeta_prime_real(sigma).unwrap() - fd).abs() < 1e-8, "σ = {sigma}");
    }
}

#[test]
fn kalmar_root_and_constant() {
    let beta = kalmar_beta().unwrap();
    assert_eq!(format!("{beta:.6}"), "1.728647");
    assert!((zeta_real(beta).unwrap().value - 2.0).abs() <= 1e-12);
    assert_eq!(beta, beta_z(1.0).unwrap());
    assert!(kalmar_constant().unwrap() > 0.0);
}

fn tables(limit: usize) -> (SieveTables, FactorisationTables) {
    let s = SieveTables::build(limit).unwrap();
    let t = FactorisationTables::build(limit, FkDepth::Skip, &s).unwrap();
    (s, t)
}

#[test]
fn summatory_growth_exponent() {
    let (_, t) = tables(1_000_000);
    let beta = kalmar_beta().unwrap();
    let mut prev = 0.0;
    for x in [100usize, 1000, 10_000, 100_000, 1_000_000] {
        let s = t.f_summatory(x).unwrap() as f64;
        assert!(s > x as f64);
        let crude = s.ln() / (x as f64).ln();
        assert!(crude > prev && crude < beta, "x = {x}: {crude}");
        prev = crude;
    }
    // log-log slope over the last decade
    let s5 = t.f_summatory(100_000).unwrap() as f64;
    let s6 = t.f_summatory(1_000_000).unwrap() as f64;
    let slope = (s6 / s5).ln() / 10f64.ln();
    assert!((slope - beta).abs() < 0.02, "slope {slope}");
}

#[test]
fn kalmar_ratio_trend() {
    let (_, t) = tables(1_000_000);
    let small = kalmar_ratio(&t, 100).unwrap();
    let large = kalmar_ratio(&t, 1_000_000).unwrap();
    println!("ratio at 1e2 = {}, at 1e6 = {}", small.ratio, large.ratio);
    assert!((0.9..=1.1).contains(&large.ratio));
    assert!((large.ratio - 1.0).abs() < (small.ratio - 1.0).abs());
    for x in [1usize, 2, 10, 1000] {
        assert!(kalmar_ratio(&t, x).unwrap().ratio > 0.0);
    }
}

#[test]
fn mobius_correlation_with_f() {
    let (s, t) = tables(1_000_000);
    let r = sarnak_correlation(&t, &s, 10, Xi::F).unwrap();
    assert_eq!((r.numerator, r.denominator), (3, 1 + 1 + 1 + 2 + 1 + 3 + 1 + 4 + 2 + 3));
    let mut prev = f64::INFINITY;
    for x in [1000usize, 10_000, 100_000, 1_000_000] {
        let r = sarnak_correlation(&t, &s, x, Xi::F).unwrap();
        let direct: i128 = (1..=x).map(|n| s.mobius(n).unwrap() as i128 * t.f(n).unwrap() as i128).sum();
        assert_eq!(r.numerator, direct);
        assert!(r.ratio.abs() < prev, "x = {x}");
        prev = r.ratio.abs();
        let sq = sarnak_correlation(&t, &s, x, Xi::FMu2).unwrap();
        println!("x = {x}: f ratio {}, f·μ² ratio {}", r.ratio, sq.ratio);
        assert!(sq.denominator <= r.denominator);
    }
}
