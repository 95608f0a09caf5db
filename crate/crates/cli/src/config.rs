//! Run configuration: flags, an optional JSON config file and the
//! `MACPOLY_DIGITS` environment variable, in that order of priority.

use std::path::Path;

use macpoly_core::{Error, Params, PrecisionContext, Result};
use serde::{Deserialize, Serialize};

/// Environment variable that replaces the built-in default precision.
pub const DIGITS_ENV: &str = "MACPOLY_DIGITS";
pub const DEFAULT_DIGITS: u32 = 120;

/// Parameter point and precision of a run. Parameters are kept as the
/// literals the user gave so that a report reproduces its own input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: String,
    pub nu: String,
    pub lambda: String,
    pub t: String,
    pub n: usize,
    pub digits: u32,
    pub tol_digits: Option<u32>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            alpha: "1/2".into(),
            nu: "3/2".into(),
            lambda: "1".into(),
            t: "1".into(),
            n: 4,
            digits: DEFAULT_DIGITS,
            tol_digits: None,
        }
    }
}

/// Every field optional; what a config file or a set of flags may supply.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub alpha: Option<String>,
    pub nu: Option<String>,
    pub lambda: Option<String>,
    pub t: Option<String>,
    pub n: Option<usize>,
    pub digits: Option<u32>,
    pub tol_digits: Option<u32>,
}

impl PartialConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Domain(format!("reading {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Domain(format!("config {}: {e}", path.display())))
    }

    /// Fields of `self` win over those of `base`.
    pub fn over(self, base: PartialConfig) -> PartialConfig {
        PartialConfig {
            alpha: self.alpha.or(base.alpha),
            nu: self.nu.or(base.nu),
            lambda: self.lambda.or(base.lambda),
            t: self.t.or(base.t),
            n: self.n.or(base.n),
            digits: self.digits.or(base.digits),
            tol_digits: self.tol_digits.or(base.tol_digits),
        }
    }
}

/// Default digits from the environment, if set.
pub fn env_digits() -> Result<Option<u32>> {
    match std::env::var(DIGITS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Domain(format!("{DIGITS_ENV}={v:?} is not a digit count"))),
        Err(_) => Ok(None),
    }
}

impl RunConfig {
    pub fn resolve(partial: PartialConfig) -> Result<Self> {
        let d = RunConfig::default();
        let digits = match partial.digits {
            Some(v) => v,
            None => env_digits()?.unwrap_or(d.digits),
        };
        let cfg = Self {
            alpha: partial.alpha.unwrap_or(d.alpha),
            nu: partial.nu.unwrap_or(d.nu),
            lambda: partial.lambda.unwrap_or(d.lambda),
            t: partial.t.unwrap_or(d.t),
            n: partial.n.unwrap_or(d.n),
            digits,
            tol_digits: partial.tol_digits,
        };
        cfg.context()?;
        cfg.params()?;
        Ok(cfg)
    }

    pub fn context(&self) -> Result<PrecisionContext> {
        let ctx = PrecisionContext::new(self.digits)?;
        match self.tol_digits {
            Some(t) => ctx.with_tol_digits(t),
            None => Ok(ctx),
        }
    }

    pub fn params(&self) -> Result<Params> {
        let ctx = self.context()?;
        Params::parse(&self.alpha, &self.nu, &self.lambda, &self.t, &ctx)
    }
}
