//! Run configuration shared by the subcommands and `reproduce`.

use std::path::PathBuf;

use anyhow::{ensure, Result};
use num_complex::Complex64;
use numerorum::arith::DEFAULT_MAX_LIMIT;
use serde::{Deserialize, Serialize};

/// Environment variable holding the largest sieve limit a run may request.
pub const MAX_LIMIT_ENV: &str = "NUMERORUM_MAX_LIMIT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub limit: usize,
    pub kappas: Vec<u32>,
    pub zs: Vec<Complex64>,
    pub checkpoints: Vec<usize>,
    pub out_dir: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub max_limit: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            limit: 1_000_000,
            kappas: vec![2, 3],
            zs: vec![
                Complex64::new(-1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(2.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(2.0, -3.0),
            ],
            checkpoints: vec![100, 1000, 10_000, 100_000, 1_000_000],
            out_dir: None,
            format: Format::Json,
            seed: 0x5eed,
            max_limit: DEFAULT_MAX_LIMIT,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        ensure!(self.limit >= 2, "limit must be at least 2, got {}", self.limit);
        if self.limit > self.max_limit {
            return Err(numerorum::Error::Capacity {
                what: "sieve limit",
                requested: self.limit as u128,
                maximum: self.max_limit as u128,
            }
            .into());
        }
        ensure!(
            self.checkpoints.windows(2).all(|w| w[0] < w[1]),
            "checkpoints must be strictly increasing"
        );
        ensure!(
            self.checkpoints.last().is_none_or(|&x| x <= self.limit),
            "checkpoints must not exceed the limit {}",
            self.limit
        );
        ensure!(self.kappas.iter().all(|&k| k >= 2), "every kappa must be at least 2");
        Ok(())
    }
}

/// Parses `RE` or `RE,IM`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let mut parts = s.split(',').map(str::trim);
    let re = parts.next().unwrap_or("");
    let re: f64 = re.parse().map_err(|_| format!("bad real part {re:?}"))?;
    let im: f64 = match parts.next() {
        Some(im) => im.parse().map_err(|_| format!("bad imaginary part {im:?}"))?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(format!("expected RE or RE,IM, got {s:?}"));
    }
    if !re.is_finite() || !im.is_finite() {
        return Err(format!("z must be finite, got {s:?}"));
    }
    Ok(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_configs() {
        let mut c = RunConfig { limit: 1, ..RunConfig::default() };
        assert!(c.validate().is_err());
        c.limit = 1000;
        assert!(c.validate().is_err(), "checkpoints beyond limit");
        c.checkpoints = vec![100, 10];
        assert!(c.validate().is_err());
        c.checkpoints = vec![10, 100];
        c.max_limit = 500;
        let err = c.validate().unwrap_err();
        assert!(matches!(err.downcast_ref::<numerorum::Error>(), Some(numerorum::Error::Capacity { .. })));
    }

    #[test]
    fn complex_arguments() {
        assert_eq!(parse_complex("2").unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(parse_complex("2,-3").unwrap(), Complex64::new(2.0, -3.0));
        assert_eq!(parse_complex("-0.5, 1").unwrap(), Complex64::new(-0.5, 1.0));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("x").is_err());
        assert!(parse_complex("nan").is_err());
    }
}
