//! Argument parsing and subcommand dispatch.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use numerorum::arith::{FactoredInt, SieveTables};
use numerorum::dirichlet::{convolve, dirichlet_inverse, ArithFn, ComplexPoint, Scalar};
use numerorum::factorisatio::{
    d_lambda, d_lambda_bound, enumerate_partitions, FactorisationTables, FkDepth,
    PartitionMultiset,
};
use numerorum::family::{beta_z, growth_offset, ZFamilyContext};
use numerorum::hardy_ramanujan::{
    coffeeshop_sum, coffeeshop_sum_exact, exponent_estimate, psi_tuple, CountingProfile,
};
use numerorum::io::{
    read_arith_fn_csv, to_integer_fn, write_arith_fn_csv, write_int_table, write_int_table_json,
    IntTable,
};
use numerorum::series::{kalmar_ratio, sarnak_correlation, zeta_real, Xi};

use crate::checks;
use crate::config::{parse_complex, Format, RunConfig, MAX_LIMIT_ENV};
use crate::reproduce;

#[derive(Debug, Parser)]
#[command(name = "numerorum", version, about = "Ordered factorisations, Dirichlet inversion and kappa-free counting")]
pub struct Cli {
    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = RunConfig::default().seed)]
    pub seed: u64,

    /// Write the output to `<dir>/<subcommand>.<ext>` instead of stdout.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,

    /// Largest sieve limit any subcommand may allocate.
    #[arg(long, global = true, env = MAX_LIMIT_ENV, default_value_t = RunConfig::default().max_limit)]
    pub max_limit: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SieveEmit {
    Mu,
    Omega,
    Spf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FactorisatioEmit {
    F,
    Fk,
    Feven,
    Fodd,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DzEmit {
    Fz,
    Fztilde,
    Gz,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum XiArg {
    F,
    Fmu2,
}

impl From<XiArg> for Xi {
    fn from(x: XiArg) -> Xi {
        match x {
            XiArg::F => Xi::F,
            XiArg::Fmu2 => Xi::FMu2,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Möbius, omega or smallest-prime-factor tables.
    Sieve {
        #[arg(long)]
        limit: usize,
        #[arg(long, value_enum, default_value = "mu")]
        emit: SieveEmit,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Ordered factorisation counts f, f_k, f_even, f_odd.
    Factorisatio {
        #[arg(long)]
        limit: usize,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_enum, default_value = "f")]
        emit: FactorisatioEmit,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// d_lambda(n) and its bound, for one partition or all of them.
    Dlambda {
        #[arg(long)]
        n: u64,
        /// Parts of the partition, e.g. 1,2,3.
        #[arg(long, value_delimiter = ',')]
        lambda: Option<Vec<u32>>,
    },
    /// Dirichlet inverse of a function given as CSV rows n,re,im.
    Invert {
        #[arg(long, conflicts_with = "identity", required_unless_present = "identity")]
        input: Option<PathBuf>,
        /// Invert the convolution identity I.
        #[arg(long)]
        identity: bool,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Dirichlet convolution of two CSV functions.
    Convolve {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Counts of kappa-free n <= x by number of prime factors.
    HrCount {
        #[arg(long)]
        x: usize,
        #[arg(long)]
        kappa: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Least index tuple over the kappa-expanded primes.
    Psi {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        kappa: u32,
    },
    /// Sum of C^Omega(n) f(n) over kappa-free n <= x.
    Coffeeshop {
        #[arg(long)]
        x: usize,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 2)]
        kappa: u32,
    },
    /// F_z, its tilde and the inverse G_z.
    Dz {
        /// RE or RE,IM
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex64,
        #[arg(long)]
        limit: usize,
        #[arg(long, value_enum, default_value = "gz")]
        emit: DzEmit,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Truncated D_z(s) and its squarefree companion at s = sigma + it.
    DzEval {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex64,
        #[arg(long, allow_hyphen_values = true)]
        sigma: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        t: f64,
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
    },
    /// The sigma with zeta(sigma) = 1 + 1/|z|.
    BetaZ {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex64,
    },
    /// Certified zeta(sigma) for real sigma > 1.
    Zeta {
        #[arg(long)]
        sigma: f64,
        /// Report the derivative.
        #[arg(long)]
        prime: bool,
    },
    /// Summatory f against its asymptotic.
    Kalmar {
        #[arg(long)]
        x: usize,
    },
    /// Correlation of mu with f or f mu^2.
    Sarnak {
        #[arg(long)]
        x: usize,
        #[arg(long, value_enum, default_value = "f")]
        xi: XiArg,
    },
    /// Run invariant suites; exits 1 if any check fails.
    Verify {
        /// all, arith, factorisatio, dirichlet, hardy-ramanujan, family or series.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 5000)]
        limit: usize,
    },
    /// Full report with identities and fitted constants.
    Reproduce {
        #[arg(long, default_value_t = RunConfig::default().limit)]
        limit: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Sieve { .. } => "sieve",
            Command::Factorisatio { .. } => "factorisatio",
            Command::Dlambda { .. } => "dlambda",
            Command::Invert { .. } => "invert",
            Command::Convolve { .. } => "convolve",
            Command::HrCount { .. } => "hr-count",
            Command::Psi { .. } => "psi",
            Command::Coffeeshop { .. } => "coffeeshop",
            Command::Dz { .. } => "dz",
            Command::DzEval { .. } => "dz-eval",
            Command::BetaZ { .. } => "beta-z",
            Command::Zeta { .. } => "zeta",
            Command::Kalmar { .. } => "kalmar",
            Command::Sarnak { .. } => "sarnak",
            Command::Verify { .. } => "verify",
            Command::Reproduce { .. } => "reproduce",
        }
    }
}

/// An argument combination that parses but cannot be served.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

struct Output {
    ext: &'static str,
    body: Vec<u8>,
    failed: bool,
}

impl Output {
    fn text(ext: &'static str, body: String) -> Self {
        Output { ext, body: body.into_bytes(), failed: false }
    }

    fn json(value: &impl Serialize) -> Result<Self> {
        let mut body = serde_json::to_vec_pretty(value)?;
        body.push(b'\n');
        Ok(Output { ext: "json", body, failed: false })
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code. Output goes to `stdout`, errors to stderr.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if e.use_stderr() {
                eprint!("{e}");
            } else {
                let _ = write!(stdout, "{e}");
            }
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => match deliver(&cli, &out, stdout) {
            Ok(()) => i32::from(out.failed),
            Err(e) => {
                eprintln!("error: {e:#}");
                1
            }
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &anyhow::Error) -> i32 {
    if e.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    match e.downcast_ref::<numerorum::Error>() {
        Some(numerorum::Error::Capacity { .. } | numerorum::Error::OutOfRange { .. }) => 2,
        _ => 1,
    }
}

fn deliver(cli: &Cli, out: &Output, stdout: &mut dyn Write) -> Result<()> {
    match &cli.out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(format!("{}.{}", cli.command.name(), out.ext));
            std::fs::write(&path, &out.body).with_context(|| format!("writing {}", path.display()))?;
            writeln!(stdout, "{}", path.display())?;
        }
        None => stdout.write_all(&out.body)?,
    }
    Ok(())
}

fn sieve(limit: usize, cli: &Cli) -> Result<SieveTables> {
    if limit < 1 {
        return Err(usage("limit must be at least 1"));
    }
    Ok(SieveTables::build_with_cap(limit.max(2), cli.max_limit)?)
}

fn int_table(format: Format, headers: &[&str], rows: Vec<Vec<i128>>) -> Result<Output> {
    let mut body = Vec::new();
    match format {
        Format::Csv => write_int_table(&mut body, headers, rows)?,
        Format::Json => {
            let table = IntTable {
                headers: headers.iter().map(|h| h.to_string()).collect(),
                rows,
            };
            write_int_table_json(&mut body, &table)?;
            body.push(b'\n');
        }
    }
    Ok(Output { ext: format.extension(), body, failed: false })
}

fn arith_fn_csv<T: Scalar>(f: &ArithFn<T>) -> Result<Output> {
    let mut body = Vec::new();
    write_arith_fn_csv(f, &mut body)?;
    Ok(Output { ext: "csv", body, failed: false })
}

fn read_fn(path: &Path) -> Result<ArithFn<Complex64>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_arith_fn_csv(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}

fn exact_integer(z: Complex64) -> Option<i128> {
    checks::as_exact_integer(z)
}

fn execute(cli: &Cli) -> Result<Output> {
    match &cli.command {
        &Command::Sieve { limit, emit, format } => {
            let s = sieve(limit, cli)?;
            let rows = 1..=limit;
            let (headers, rows): (&[&str], Vec<Vec<i128>>) = match emit {
                SieveEmit::Mu => (&["n", "mu"], rows.map(|n| vec![n as i128, s.mu_slice()[n] as i128]).collect()),
                SieveEmit::Omega => (
                    &["n", "omega", "big_omega"],
                    rows.map(|n| {
                        vec![n as i128, s.small_omega_slice()[n] as i128, s.big_omega_slice()[n] as i128]
                    })
                    .collect(),
                ),
                // spf(1) is reported as 1
                SieveEmit::Spf => (
                    &["n", "spf"],
                    rows.map(|n| Ok(vec![n as i128, s.spf(n)?.unwrap_or(1) as i128]))
                        .collect::<numerorum::Result<_>>()?,
                ),
            };
            int_table(format, headers, rows)
        }
        &Command::Factorisatio { limit, k, emit, format } => {
            let s = sieve(limit, cli)?;
            let depth = match (emit, k) {
                (FactorisatioEmit::Fk, None) => return Err(usage("--emit fk needs --k")),
                (FactorisatioEmit::Fk, Some(0)) => return Err(usage("--k must be at least 1")),
                (FactorisatioEmit::Fk, Some(k)) => FkDepth::Truncated(k),
                _ => FkDepth::Skip,
            };
            let t = FactorisationTables::build(limit, depth, &s)?;
            let (column, value): (String, Box<dyn Fn(usize) -> numerorum::Result<u64>>) = match emit {
                FactorisatioEmit::F => ("f".into(), Box::new(|n| t.f(n))),
                FactorisatioEmit::Feven => ("f_even".into(), Box::new(|n| t.f_even(n))),
                FactorisatioEmit::Fodd => ("f_odd".into(), Box::new(|n| t.f_odd(n))),
                FactorisatioEmit::Fk => {
                    let k = k.expect("checked above");
                    (format!("f_{k}"), Box::new(move |n| t.fk(n, k)))
                }
            };
            let rows = (1..=limit)
                .map(|n| Ok(vec![n as i128, value(n)? as i128]))
                .collect::<numerorum::Result<_>>()?;
            int_table(format, &["n", &column], rows)
        }
        Command::Dlambda { n, lambda } => {
            let fact = FactoredInt::by_trial_division(*n)?;
            let record = |lam: &PartitionMultiset| -> Result<serde_json::Value> {
                Ok(json!({
                    "n": n,
                    "lambda": lam.to_string(),
                    "parts": lam.parts(),
                    "d_lambda": d_lambda(&fact, lam)?,
                    "bound": d_lambda_bound(lam).to_string(),
                }))
            };
            match lambda {
                Some(parts) => Output::json(&record(&PartitionMultiset::from_parts(parts)?)?),
                None if *n == 1 => Output::json(&Vec::<serde_json::Value>::new()),
                None => {
                    let all = enumerate_partitions(fact.big_omega())?
                        .map(|lam| record(&lam))
                        .collect::<Result<Vec<_>>>()?;
                    Output::json(&all)
                }
            }
        }
        Command::Invert { input, identity, limit } => {
            let f = if *identity {
                ArithFn::<Complex64>::unit(limit.unwrap_or(10))?
            } else {
                let f = read_fn(input.as_deref().expect("clap requires input"))?;
                match limit {
                    Some(l) => f.truncate(*l)?,
                    None => f,
                }
            };
            match to_integer_fn(&f) {
                Some(exact) => arith_fn_csv(&dirichlet_inverse(&exact)?),
                None => arith_fn_csv(&dirichlet_inverse(&f)?),
            }
        }
        Command::Convolve { a, b } => {
            let (a, b) = (read_fn(a)?, read_fn(b)?);
            match (to_integer_fn(&a), to_integer_fn(&b)) {
                (Some(a), Some(b)) => arith_fn_csv(&convolve(&a, &b)?),
                _ => arith_fn_csv(&convolve(&a, &b)?),
            }
        }
        &Command::HrCount { x, kappa, format } => {
            let s = sieve(x, cli)?;
            let profile = CountingProfile::build(&s, x, kappa)?;
            let rows = profile
                .per_ell
                .iter()
                .map(|(&ell, &count)| vec![ell as i128, count as i128])
                .collect();
            int_table(format, &["ell", "count"], rows)
        }
        &Command::Psi { n, kappa } => {
            let fact = FactoredInt::by_trial_division(n)?;
            let s = sieve((n as usize).clamp(2, 1 << 20), cli)?;
            let psi = psi_tuple(&fact, kappa, &s)?;
            Ok(Output::text("txt", format!("{psi}\nJ={}\n", psi.j)))
        }
        &Command::Coffeeshop { x, c, kappa } => {
            let s = sieve(x, cli)?;
            let t = FactorisationTables::build(x, FkDepth::Skip, &s)?;
            let sum = coffeeshop_sum(&t, &s, x, c, kappa)?;
            let exact = if c >= 0.0 && c.fract() == 0.0 && c <= u64::MAX as f64 {
                coffeeshop_sum_exact(&t, &s, x, c as u64, kappa).ok().map(|v| v.to_string())
            } else {
                None
            };
            Output::json(&json!({
                "x": x,
                "c": c,
                "kappa": kappa,
                "sum": sum,
                "exact_sum": exact,
                "exponent": exponent_estimate(sum, x),
            }))
        }
        &Command::Dz { z, limit, emit, format } => {
            let s = sieve(limit, cli)?;
            match exact_integer(z) {
                Some(zi) => {
                    let ctx = ZFamilyContext::with_sieve(zi, limit, &s)?;
                    let f = pick(&ctx, emit);
                    match format {
                        Format::Csv => arith_fn_csv(f),
                        Format::Json => int_table(
                            format,
                            &["n", "value"],
                            f.values().iter().enumerate().map(|(i, &v)| vec![i as i128 + 1, v]).collect(),
                        ),
                    }
                }
                None => {
                    if format == Format::Json {
                        return Err(usage("complex-valued tables are written as CSV only; use --format csv"));
                    }
                    let ctx = ZFamilyContext::with_sieve(z, limit, &s)?;
                    arith_fn_csv(pick(&ctx, emit))
                }
            }
        }
        &Command::DzEval { z, sigma, t, limit } => {
            let s = sieve(limit, cli)?;
            let point = ComplexPoint::new(sigma, t);
            let ctx = ZFamilyContext::with_sieve(z, limit, &s)?;
            let d_z = ctx.d_z(point);
            let d_dagger = ctx.d_dagger(&s, point);
            Output::json(&json!({
                "z": [z.re, z.im],
                "s": [sigma, t],
                "limit": limit,
                "d_z": [d_z.re, d_z.im],
                "d_dagger": [d_dagger.re, d_dagger.im],
                "product": [(d_z * d_dagger).re, (d_z * d_dagger).im],
                "beta_z": finite(ctx.beta_z()),
            }))
        }
        &Command::BetaZ { z } => {
            let abs = z.norm();
            Output::json(&json!({
                "z": [z.re, z.im],
                "abs_z": abs,
                "beta_z": finite(beta_z(abs)?),
                "growth_offset": growth_offset(abs),
            }))
        }
        &Command::Zeta { sigma, prime } => {
            let z = zeta_real(sigma)?;
            if prime {
                Output::json(&json!({
                    "sigma": z.sigma,
                    "derivative": z.derivative,
                    "error_bound": z.derivative_error,
                    "method": z.method,
                    "terms": z.terms,
                }))
            } else {
                Output::json(&z)
            }
        }
        &Command::Kalmar { x } => {
            let s = sieve(x, cli)?;
            let t = FactorisationTables::build(x, FkDepth::Skip, &s)?;
            Output::json(&kalmar_ratio(&t, x)?)
        }
        &Command::Sarnak { x, xi } => {
            let s = sieve(x, cli)?;
            let t = FactorisationTables::build(x, FkDepth::Skip, &s)?;
            Output::json(&sarnak_correlation(&t, &s, x, xi.into())?)
        }
        Command::Verify { suite, limit } => {
            if *limit > cli.max_limit {
                return Err(numerorum::Error::Capacity {
                    what: "verify limit",
                    requested: *limit as u128,
                    maximum: cli.max_limit as u128,
                }
                .into());
            }
            let outcomes = checks::run_suite(suite, *limit, cli.seed).map_err(|e| usage(format!("{e:#}")))?;
            let mut body = String::new();
            for o in &outcomes {
                body.push_str(&o.line());
                body.push('\n');
            }
            let failures = outcomes.iter().filter(|o| o.failed()).count();
            body.push_str(&format!("{} checks, {failures} failed\n", outcomes.len()));
            Ok(Output { ext: "txt", body: body.into_bytes(), failed: failures > 0 })
        }
        &Command::Reproduce { limit } => {
            let config = RunConfig {
                limit,
                checkpoints: checks::decades(100, limit),
                seed: cli.seed,
                max_limit: cli.max_limit,
                ..RunConfig::default()
            };
            config.validate().map_err(|e| match e.downcast::<numerorum::Error>() {
                Ok(inner) => inner.into(),
                Err(e) => usage(format!("{e:#}")),
            })?;
            Output::json(&reproduce::report(&config)?)
        }
    }
}

fn pick<T: Scalar>(ctx: &ZFamilyContext<T>, emit: DzEmit) -> &ArithFn<T> {
    match emit {
        DzEmit::Fz => ctx.fz(),
        DzEmit::Fztilde => ctx.fz_tilde(),
        DzEmit::Gz => ctx.gz(),
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let code = run(std::iter::once("numerorum").chain(args.iter().copied()), &mut out);
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn psi_example() {
        assert_eq!(call(&["psi", "--n", "4400", "--kappa", "5"]), (0, "1,2,3,4,9,10,17\nJ=17\n".into()));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&["psi", "--n", "4400"]).0, 2);
        assert_eq!(call(&["nope"]).0, 2);
        assert_eq!(call(&["sieve", "--limit", "10", "--max-limit", "5"]).0, 2);
        assert_eq!(call(&["factorisatio", "--limit", "10", "--emit", "fk"]).0, 2);
        assert_eq!(call(&["psi", "--n", "4", "--kappa", "2"]).0, 1);
    }

    #[test]
    fn help_exits_zero() {
        let (code, text) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(text.contains("reproduce"));
    }

    #[test]
    fn identity_inverts_to_identity() {
        let (code, text) = call(&["invert", "--identity"]);
        assert_eq!(code, 0);
        let f = read_arith_fn_csv(text.as_bytes()).unwrap();
        assert_eq!(f, ArithFn::unit(10).unwrap());
    }

    #[test]
    fn negative_z_is_accepted() {
        let (code, text) = call(&["dz", "--z", "-1", "--limit", "12", "--emit", "gz"]);
        assert_eq!(code, 0, "{text}");
        assert!(call(&["beta-z", "--z", "0"]).1.contains("null"));
    }
}
