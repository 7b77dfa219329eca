use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use drinfeld_census::apoly::APoly;
use drinfeld_census::census::{self, CensusOptions, CensusReport};
use drinfeld_census::drinfeld::GammaCtx;
use drinfeld_census::field::{FieldCtx, DEFAULT_CAP};
use drinfeld_census::quadclass;

const GRAMMAR: &str = "Polynomials in T are written in ASCII, e.g. \"T^3-T\", \"2*T^2+1\", \"T^4 + 2T + 1\". \
Integer coefficients are reduced mod p; over non-prime F_q write {k} for the field element with index k.";

/// Exhaustive census of rank-2 Drinfeld modules over finite fields.
#[derive(Parser)]
#[command(name = "dcensus", version, after_help = GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate every module (g, Δ) for one (q, n, d) and write a report.
    Census(CensusArgs),
    /// Print H(D) with one line per square divisor l.
    Hurwitz(DiscArgs),
    /// Print the class number h(D) of the order of discriminant D.
    Classno(DiscArgs),
    /// Run several censuses and print one table of claim verdicts.
    Verify(VerifyArgs),
    /// Tabulate C and C0 against q for a fixed (d, m).
    Trend(TrendArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct FieldArgs {
    /// Size of the constant field F_q (a prime power).
    #[arg(long, conflicts_with_all = ["p", "s"])]
    q: Option<u64>,
    /// Characteristic, used with --s instead of --q.
    #[arg(long, requires = "s")]
    p: Option<u32>,
    /// Degree of F_q over F_p.
    #[arg(long, requires = "p")]
    s: Option<u32>,
}

impl FieldArgs {
    fn ctx(&self, n: u32, cap: u64) -> Result<FieldCtx> {
        let ctx = match (self.q, self.p, self.s) {
            (Some(q), _, _) => FieldCtx::for_q(q, n, cap),
            (None, Some(p), Some(s)) => FieldCtx::new(p, s, n, cap),
            _ => bail!("give either --q or both --p and --s"),
        };
        ctx.context("invalid field parameters")
    }
}

#[derive(Args)]
struct RunArgs {
    /// Largest admissible q^n.
    #[arg(long, env = "DCENSUS_CAP", default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// Worker threads; 1 forces the sequential path.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn options(&self) -> Result<CensusOptions> {
        if self.jobs == Some(0) {
            bail!("--jobs must be at least 1");
        }
        Ok(CensusOptions { jobs: self.jobs })
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => std::io::stdout().write_all(text.as_bytes()).context("writing stdout"),
        }
    }
}

#[derive(Args)]
struct CensusArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Degree of L over F_q.
    #[arg(long)]
    n: u32,
    /// Degree of the characteristic P; must divide n.
    #[arg(long)]
    d: u32,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct DiscArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Discriminant D in T.
    #[arg(long)]
    disc: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// One census as Q,N,D; repeatable.
    #[arg(long = "case", value_parser = parse_case)]
    cases: Vec<(u64, u32, u32)>,
    /// Grid of q values, combined with --grid-n and every d | n.
    #[arg(long, value_delimiter = ',')]
    grid_q: Vec<u64>,
    #[arg(long, value_delimiter = ',')]
    grid_n: Vec<u32>,
    /// Grid cells with q^n above this are dropped.
    #[arg(long, default_value_t = 400)]
    grid_max: u64,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct TrendArgs {
    #[arg(long)]
    d: u32,
    #[arg(long)]
    m: u32,
    /// Values of q.
    #[arg(long, value_delimiter = ',', required = true)]
    q: Vec<u64>,
    #[command(flatten)]
    run: RunArgs,
}

fn parse_case(s: &str) -> std::result::Result<(u64, u32, u32), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err("expected Q,N,D".into());
    }
    let bad = |e: std::num::ParseIntError| e.to_string();
    Ok((parts[0].parse().map_err(bad)?, parts[1].parse().map_err(bad)?, parts[2].parse().map_err(bad)?))
}

fn run_one(ctx: FieldCtx, d: u32, opts: &CensusOptions) -> Result<CensusReport> {
    let (q, n) = (ctx.q(), ctx.n());
    let gamma = GammaCtx::new(ctx, d).with_context(|| format!("invalid characteristic degree d = {d} for n = {n}"))?;
    census::run_census(&gamma, opts).with_context(|| format!("census q = {q}, n = {n}, d = {d}"))
}

fn cmd_census(a: &CensusArgs) -> Result<()> {
    let report = run_one(a.field.ctx(a.n, a.run.cap)?, a.d, &a.run.options()?)?;
    a.run.emit(&match a.run.format {
        Format::Json => census::to_json(&report),
        Format::Csv => census::to_csv(&report),
    })
}

fn parse_disc(a: &DiscArgs) -> Result<(FieldCtx, APoly)> {
    let ctx = a.field.ctx(1, u64::MAX)?;
    let d = APoly::parse(&a.disc, ctx.fq()).with_context(|| format!("cannot parse {:?}", a.disc))?;
    Ok((ctx, d))
}

fn cmd_hurwitz(a: &DiscArgs) -> Result<()> {
    let (ctx, d) = parse_disc(a)?;
    let f = ctx.fq();
    let terms = quadclass::hurwitz_terms(&d, &ctx)?;
    for (l, h) in &terms {
        println!("l = {}  h(D/l^2) = {h}", l.to_text(f));
    }
    println!("H = {}", terms.iter().map(|t| t.1).sum::<u64>());
    Ok(())
}

fn cmd_classno(a: &DiscArgs) -> Result<()> {
    let (ctx, d) = parse_disc(a)?;
    let r = quadclass::class_number(&d, &ctx)?;
    println!("h = {}", r.h);
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> Result<ExitCode> {
    let mut cases = a.cases.clone();
    cases.extend(census::grid_cases(&a.grid_q, &a.grid_n, a.grid_max));
    if cases.is_empty() {
        eprintln!("error: empty sweep; give --case Q,N,D or --grid-q/--grid-n");
        return Ok(ExitCode::from(2));
    }
    let opts = a.run.options()?;
    let mut reports = Vec::new();
    for (q, n, d) in cases {
        reports.push(run_one(FieldCtx::for_q(q, n, a.run.cap)?, d, &opts)?);
    }
    let text = match a.run.format {
        Format::Json => {
            let rows: Vec<_> = reports
                .iter()
                .map(|r| serde_json::json!({ "parameters": r.parameters, "claims": r.claims }))
                .collect();
            serde_json::to_string_pretty(&rows)? + "\n"
        }
        Format::Csv => census::claims_table(&reports),
    };
    a.run.emit(&text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_trend(a: &TrendArgs) -> Result<()> {
    let opts = a.run.options()?;
    let n = a.d * a.m;
    let mut reports = Vec::new();
    for &q in &a.q {
        reports.push(run_one(FieldCtx::for_q(q, n, a.run.cap)?, a.d, &opts)?);
    }
    let trend = census::cyclicity_trend(&reports)?;
    let text = match a.run.format {
        Format::Json => serde_json::to_string_pretty(&trend)? + "\n",
        Format::Csv => {
            let mut s = String::from("q,C,C0,one_minus_C,one_minus_C0\n");
            for r in &trend.rows {
                s.push_str(&format!("{},{},{},{},{}\n", r.q, r.c, r.c0, r.one_minus_c, r.one_minus_c0));
            }
            s.push_str(&format!(
                "# one_minus_C strictly decreasing: {}; one_minus_C0 strictly decreasing: {}\n",
                trend.one_minus_c_strictly_decreasing, trend.one_minus_c0_strictly_decreasing
            ));
            s
        }
    };
    a.run.emit(&text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Census(a) => cmd_census(a).map(|_| ExitCode::SUCCESS),
        Command::Hurwitz(a) => cmd_hurwitz(a).map(|_| ExitCode::SUCCESS),
        Command::Classno(a) => cmd_classno(a).map(|_| ExitCode::SUCCESS),
        Command::Verify(a) => cmd_verify(a),
        Command::Trend(a) => cmd_trend(a).map(|_| ExitCode::SUCCESS),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
