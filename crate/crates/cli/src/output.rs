//! Serialized forms. Every number is a decimal string at the run's working
//! digits; JSON floats are never emitted, and struct field order is fixed so
//! that equal runs give equal bytes.

use std::io::Write;

use macpoly_core::opoly::{GaussRule, RecurrenceTable};
use macpoly_core::{IdentityReport, Params, PrecisionContext, Real};
use serde::Serialize;

use crate::config::RunConfig;
use crate::suites::SuiteReport;

#[derive(Clone, Debug, Serialize)]
pub struct ParamsOut {
    pub alpha: String,
    pub nu: String,
    pub lambda: String,
    pub t: String,
}

impl ParamsOut {
    pub fn new(p: &Params, ctx: &PrecisionContext) -> Self {
        Self {
            alpha: ctx.format(&p.alpha),
            nu: ctx.format(&p.nu),
            lambda: ctx.format(&p.lambda),
            t: ctx.format(&p.t),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualOut {
    pub identity: String,
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub value: String,
    pub tol: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOut {
    pub suite: String,
    pub id: String,
    pub params: Option<ParamsOut>,
    pub residuals: Vec<ResidualOut>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SuiteOut {
    pub fn new(suite: &str, r: &IdentityReport, ctx: &PrecisionContext) -> Self {
        Self {
            suite: suite.to_string(),
            id: r.id.clone(),
            params: r.params.as_ref().map(|p| ParamsOut::new(p, ctx)),
            residuals: r
                .entries
                .iter()
                .map(|e| ResidualOut {
                    identity: e.identity.clone(),
                    n: e.n,
                    m: e.m,
                    value: ctx.format(&e.value),
                    tol: ctx.format(&e.tol),
                    pass: e.pass,
                })
                .collect(),
            notes: r.notes.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigOut {
    #[serde(flatten)]
    pub run: RunConfig,
    pub suite: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub config: ConfigOut,
    pub pass: bool,
    pub suites: Vec<SuiteOut>,
    /// Seconds, only with `--timing`; otherwise null so that reports of equal
    /// runs are byte-identical.
    pub wallclock: Option<String>,
}

impl VerifyReport {
    pub fn new(cfg: &RunConfig, suite: &str, reports: &[SuiteReport], ctx: &PrecisionContext) -> Self {
        let suites: Vec<SuiteOut> = reports
            .iter()
            .map(|r| SuiteOut::new(r.suite.name(), &r.report, ctx))
            .collect();
        Self {
            config: ConfigOut {
                run: cfg.clone(),
                suite: suite.to_string(),
            },
            pass: suites.iter().all(|s| s.residuals.iter().all(|r| r.pass)),
            suites,
            wallclock: None,
        }
    }

    /// Total number of residuals.
    pub fn count(&self) -> usize {
        self.suites.iter().map(|s| s.residuals.len()).sum()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub digits: u32,
    pub tol: String,
    pub moment_source: String,
    pub version: String,
}

impl Metadata {
    fn new(ctx: &PrecisionContext, source: &str) -> Self {
        Self {
            digits: ctx.digits(),
            tol: format!("1e-{}", ctx.tol_digits()),
            moment_source: source.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableOut {
    pub config: RunConfig,
    pub metadata: Metadata,
    pub params: ParamsOut,
    /// `μ_0 … μ_{2N}`.
    pub mu: Vec<String>,
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub d: Vec<String>,
    /// `A_0` is undefined and written as null.
    #[serde(rename = "A")]
    pub big_a: Vec<Option<String>>,
    #[serde(rename = "B")]
    pub big_b: Vec<String>,
    /// Ascending coefficients of `P_0 … P_N`.
    pub coefficients: Vec<Vec<String>>,
}

impl TableOut {
    pub fn new(cfg: &RunConfig, table: &RecurrenceTable, n: usize) -> Self {
        let ctx = &table.ctx;
        let f = |x: &Real| ctx.format(x);
        Self {
            config: cfg.clone(),
            metadata: Metadata::new(ctx, table.source.name()),
            params: ParamsOut::new(&table.params, ctx),
            mu: table.mu[..=2 * n].iter().map(f).collect(),
            a: (0..=n).map(|k| f(table.a(k))).collect(),
            b: (0..=n).map(|k| f(&table.b(k))).collect(),
            d: (0..=n).map(|k| f(&table.d(k))).collect(),
            big_a: (0..=n).map(|k| (k > 0).then(|| f(&table.big_a[k]))).collect(),
            big_b: table.big_b[..=n].iter().map(f).collect(),
            coefficients: table.coeffs[..=n].iter().map(|c| c.iter().map(f).collect()).collect(),
        }
    }

    /// Long format: `quantity,n,k,value`, `k` only for coefficients.
    pub fn write_csv(&self, out: impl Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["quantity", "n", "k", "value"])?;
        let mut put = |q: &str, n: usize, k: Option<usize>, v: &str| {
            let k = k.map(|k| k.to_string()).unwrap_or_default();
            w.write_record([q, &n.to_string(), &k, v])
        };
        for (i, v) in self.mu.iter().enumerate() {
            put("mu", i, None, v)?;
        }
        for (q, vals) in [("a", &self.a), ("b", &self.b), ("d", &self.d), ("B", &self.big_b)] {
            for (i, v) in vals.iter().enumerate() {
                put(q, i, None, v)?;
            }
        }
        for (i, v) in self.big_a.iter().enumerate() {
            if let Some(v) = v {
                put("A", i, None, v)?;
            }
        }
        for (i, c) in self.coefficients.iter().enumerate() {
            for (k, v) in c.iter().enumerate() {
                put("coeff", i, Some(k), v)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RuleOut {
    pub config: RunConfig,
    pub metadata: Metadata,
    pub params: ParamsOut,
    pub points: usize,
    pub nodes: Vec<String>,
    pub weights: Vec<String>,
}

impl RuleOut {
    pub fn new(cfg: &RunConfig, table: &RecurrenceTable, rule: &GaussRule) -> Self {
        let ctx = &table.ctx;
        Self {
            config: cfg.clone(),
            metadata: Metadata::new(ctx, table.source.name()),
            params: ParamsOut::new(&table.params, ctx),
            points: rule.degree,
            nodes: rule.nodes.iter().map(|x| ctx.format(x)).collect(),
            weights: rule.weights.iter().map(|x| ctx.format(x)).collect(),
        }
    }

    /// `i,node,weight`.
    pub fn write_csv(&self, out: impl Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["i", "node", "weight"])?;
        for (i, (x, wt)) in self.nodes.iter().zip(&self.weights).enumerate() {
            w.write_record([i.to_string().as_str(), x, wt])?;
        }
        w.flush()?;
        Ok(())
    }
}
