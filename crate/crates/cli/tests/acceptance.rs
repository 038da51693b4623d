//! Acceptance suite: thirteen criteria, one PASS/FAIL line each.
//!
//! A criterion fails if its check fails or if it overruns its time budget.
//! The process exits nonzero when a criterion outside `EXPECTED_FAILURES`
//! fails.

use std::process::Command;
use std::time::{Duration, Instant};

use anyhow::{ensure, Result};
use numerorum::arith::SieveTables;
use numerorum::factorisatio::{FactorisationTables, FkDepth};
use numerorum_cli::checks::{self, CheckOutcome};

const SEED: u64 = 0x5eed;
const MILLION: usize = 1_000_000;

/// Criteria that fail at desk scale for reasons recorded with the project
/// decisions. They still print FAIL; they do not set the exit status.
const EXPECTED_FAILURES: [(usize, &str); 1] = [(
    10,
    "the exponent decays towards 1 far too slowly to reach 1.35 by 10^6",
)];

struct Shared {
    sieve: SieveTables,
    tables: FactorisationTables,
}

fn shared() -> Result<Shared> {
    let sieve = SieveTables::build(MILLION)?;
    let tables = FactorisationTables::build(MILLION, FkDepth::Skip, &sieve)?;
    Ok(Shared { sieve, tables })
}

fn psi_via_binary() -> Result<(bool, String)> {
    let out = Command::new(env!("CARGO_BIN_EXE_numerorum"))
        .args(["psi", "--n", "4400", "--kappa", "5"])
        .output()?;
    ensure!(out.status.success(), "exit status {}", out.status);
    let text = String::from_utf8(out.stdout)?;
    let ok = text == "1,2,3,4,9,10,17\nJ=17\n";
    Ok((ok, format!("output {:?}", text.trim_end().replace('\n', " "))))
}

fn criterion(
    number: usize,
    name: &str,
    budget: Duration,
    check: impl FnOnce() -> Result<(bool, String)>,
) -> CheckOutcome {
    let start = Instant::now();
    let mut outcome = checks::run_check(name, check);
    let elapsed = start.elapsed();
    outcome.name = format!("{number:>2}. {name}");
    outcome.seconds = elapsed.as_secs_f64();
    if elapsed > budget {
        outcome.pass = Some(false);
        outcome.detail = format!("{}; over the {} s budget", outcome.detail, budget.as_secs());
    }
    outcome
}

fn main() {
    let secs = Duration::from_secs;
    let decades_from_3 = checks::decades(1000, MILLION);
    let decades_from_2 = checks::decades(100, MILLION);
    let mut outcomes = Vec::new();
    let mut report = |o: CheckOutcome| {
        println!("{}", o.line());
        outcomes.push(o);
    };

    report(criterion(1, "psi example", secs(1), psi_via_binary));
    report(criterion(2, "Kalmar root", secs(1), checks::kalmar_root));
    report(criterion(3, "Mobius recovery", secs(30), || checks::mobius_recovery(100_000, 2000)));
    report(criterion(4, "completely multiplicative inverse", secs(120), || {
        checks::multiplicative_support(200, 5000, SEED)
    }));
    report(criterion(5, "prime-power closed form", secs(60), || {
        checks::prime_power_closed_form_agreement(15, SEED)
    }));
    report(criterion(6, "binomial identity", secs(1), || checks::binomial_identity(12)));
    report(criterion(7, "mu = f_even - f_odd", secs(60), || checks::parity_mobius(100_000)));
    report(criterion(8, "d_lambda bound", secs(120), || checks::d_lambda_bound_check(3000)));

    // criteria 9 to 12 share one sieve to 10^6; its build time is charged
    // to each of them
    let start = Instant::now();
    let data = shared();
    let setup = start.elapsed();
    let with_data = |f: &dyn Fn(&Shared) -> Result<(bool, String)>| -> Result<(bool, String)> {
        match &data {
            Ok(d) => f(d),
            Err(e) => Err(anyhow::anyhow!("building tables to 10^6: {e}")),
        }
    };
    let charged = |budget: u64| secs(budget).saturating_sub(setup);

    report(criterion(9, "Kalmar asymptotic trend", charged(120), || {
        with_data(&|d| checks::kalmar_trend(&d.tables, 100, MILLION))
    }));
    report(criterion(10, "coffeeshop growth exponent", charged(180), || {
        with_data(&|d| checks::coffeeshop_trend(&d.tables, &d.sieve, &decades_from_3, 1.35))
    }));
    report(criterion(11, "kappa-free counting bound", charged(180), || {
        with_data(&|d| checks::counting_bound(&d.sieve, &decades_from_2, &[2, 3]))
    }));
    report(criterion(12, "mu f correlation", charged(120), || {
        with_data(&|d| checks::sarnak_trend(&d.tables, &d.sieve, &decades_from_3))
    }));
    if let Ok(d) = &data {
        let info = checks::run_measurement("12b. mu f mu^2 correlation", || {
            checks::sarnak_squarefree_measurement(&d.tables, &d.sieve, &decades_from_3)
        });
        println!("{}", info.line());
    }
    report(criterion(13, "round trip", secs(60), || checks::round_trip(100, 2000, SEED)));

    let mut unexpected = Vec::new();
    let mut passed = 0;
    for (i, o) in outcomes.iter().enumerate() {
        let known = EXPECTED_FAILURES.iter().find(|(n, _)| *n == i + 1);
        match (o.failed(), known) {
            (false, None) => passed += 1,
            (false, Some(_)) => {
                passed += 1;
                println!("note: criterion {} passed although it was expected to fail", i + 1);
            }
            (true, Some((_, why))) => println!("expected failure, criterion {}: {why}", i + 1),
            (true, None) => unexpected.push(o.name.as_str()),
        }
    }
    println!("acceptance: {passed} of {} criteria passed", outcomes.len());
    if !unexpected.is_empty() {
        println!("unexpected failures: {}", unexpected.join("; "));
        std::process::exit(1);
    }
}
