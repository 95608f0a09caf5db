use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use macpoly_cli::config::{PartialConfig, RunConfig, DEFAULT_DIGITS, DIGITS_ENV};
use macpoly_cli::output::{RuleOut, TableOut, VerifyReport};
use macpoly_cli::suites::{Session, Suite};
use macpoly_cli::{CliError, EXIT_FAIL, EXIT_PASS};
use macpoly_core::kernels::{kernel_point, Route};
use macpoly_core::opoly::{build_recurrence, gauss_rule};
use macpoly_core::{Error, PrecisionContext};

/// Orthogonal polynomials for the weight x^α e^{−λx} ρ_ν(xt), ρ_ν(x) = 2x^{ν/2}K_ν(2√x).
#[derive(Parser)]
#[command(name = "macpoly", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate ρ_ν(x).
    Rho {
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        digits: Option<u32>,
        #[arg(long, value_enum, default_value_t = RouteArg::LaplaceIntegral)]
        route: RouteArg,
    },
    /// Write the recurrence table of P_0 … P_N.
    Table {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run a verification suite and write a JSON report.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[command(flatten)]
        run: RunArgs,
        /// Record the wall-clock time in the report (breaks byte-identity).
        #[arg(long)]
        timing: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Write the N-point Gauss rule of the weight.
    Quadrule {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    LaplaceIntegral,
    BesselK,
    Recurrence,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Self {
        match r {
            RouteArg::LaplaceIntegral => Route::LaplaceIntegral,
            RouteArg::BesselK => Route::BesselK,
            RouteArg::Recurrence => Route::Recurrence,
        }
    }
}

/// Parameters accept decimals and `p/q` literals.
#[derive(Args)]
struct RunArgs {
    /// JSON file with any of alpha, nu, lambda, t, n, digits, tol_digits.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    /// Highest degree (table, verify) or number of nodes (quadrule).
    #[arg(long, short)]
    n: Option<usize>,
    #[arg(long, help = format!("Working digits [default: ${DIGITS_ENV} or {DEFAULT_DIGITS}]"))]
    digits: Option<u32>,
    #[arg(long)]
    tol_digits: Option<u32>,
}

impl RunArgs {
    fn resolve(self) -> Result<RunConfig, CliError> {
        let flags = PartialConfig {
            alpha: self.alpha,
            nu: self.nu,
            lambda: self.lambda,
            t: self.t,
            n: self.n,
            digits: self.digits,
            tol_digits: self.tol_digits,
        };
        let file = match &self.config {
            Some(p) => PartialConfig::load(p)?,
            None => PartialConfig::default(),
        };
        Ok(RunConfig::resolve(flags.over(file))?)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: serde::Serialize>(value: &T, path: &Option<PathBuf>) -> Result<(), CliError> {
    let mut w = sink(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Rho { nu, x, digits, route } => {
            let digits = match digits {
                Some(d) => d,
                None => macpoly_cli::config::env_digits()?.unwrap_or(DEFAULT_DIGITS),
            };
            let ctx = PrecisionContext::new(digits)?;
            let point = kernel_point(&ctx.parse(&nu)?, &ctx.parse(&x)?, route.into(), &ctx)?;
            println!("{}", ctx.format(&point.value));
            Ok(EXIT_PASS)
        }
        Command::Table { run, out } => {
            let cfg = run.resolve()?;
            let ctx = cfg.context()?;
            let table = build_recurrence(&cfg.params()?, cfg.n, &ctx)?;
            let t = TableOut::new(&cfg, &table, cfg.n);
            match out.format {
                Format::Json => write_json(&t, &out.out)?,
                Format::Csv => t.write_csv(sink(&out.out)?)?,
            }
            Ok(EXIT_PASS)
        }
        Command::Quadrule { run, out } => {
            let cfg = run.resolve()?;
            if cfg.n == 0 {
                return Err(Error::Domain("a Gauss rule needs at least one node".into()).into());
            }
            let ctx = cfg.context()?;
            let table = build_recurrence(&cfg.params()?, cfg.n - 1, &ctx)?;
            let rule = gauss_rule(&table, cfg.n)?;
            let r = RuleOut::new(&cfg, &table, &rule);
            match out.format {
                Format::Json => write_json(&r, &out.out)?,
                Format::Csv => r.write_csv(sink(&out.out)?)?,
            }
            Ok(EXIT_PASS)
        }
        Command::Verify { suite, run, timing, out } => {
            let cfg = run.resolve()?;
            let ctx = cfg.context()?;
            let start = Instant::now();
            let session = Session::new(cfg.params()?, cfg.n, ctx.clone());
            let reports = session.run(suite)?;
            let mut report = VerifyReport::new(&cfg, suite.name(), &reports, &ctx);
            if report.count() == 0 {
                let why: Vec<_> = report.suites.iter().flat_map(|s| s.notes.iter().cloned()).collect();
                return Err(Error::Domain(format!("nothing to verify: {}", why.join("; "))).into());
            }
            if timing {
                report.wallclock = Some(format!("{:.3}", start.elapsed().as_secs_f64()));
            }
            write_json(&report, &out)?;
            for s in &report.suites {
                for r in s.residuals.iter().filter(|r| !r.pass) {
                    eprintln!("FAIL {}/{}: {} n={:?} m={:?}", s.suite, s.id, r.identity, r.n, r.m);
                }
            }
            Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("macpoly: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
