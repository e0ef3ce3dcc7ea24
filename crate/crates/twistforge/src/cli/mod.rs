//! The `twistforge` command line.

mod config;

pub use config::{Format, RunConfig};

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::density::{checkpoints_for, empirical_density_at, sieve_constant, DensityReport};
use crate::error::Error;
use crate::family::{construct, sieve_n, FamilyCurve, FamilyParams, Sign};
use crate::twist::{TwistCertificate, TwistContext};
use crate::verify::{self, VerifyOptions, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_REJECTED: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

const CHUNK: usize = 4096;

#[derive(Debug, Parser)]
#[command(name = "twistforge", version, about = "Explicit elliptic curve families and their quadratic twists")]
pub struct Cli {
    /// Worker threads.
    #[arg(long, global = true, env = "TWISTFORGE_THREADS")]
    pub threads: Option<usize>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    /// TOML file with default parameters.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct family curves and sieve their parameters.
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Certify or enumerate quadratic twists.
    #[command(subcommand)]
    Twist(TwistCommand),
    /// Counts of admissible twists against the lower bound.
    Density(DensityArgs),
    /// Cross-check the implementation against independent oracles.
    Verify(VerifyArgs),
}

#[derive(Debug, Args, Clone)]
pub struct CurveArgs {
    #[arg(short)]
    pub m: Option<u32>,
    #[arg(short)]
    pub n: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub sign: Option<Sign>,
}

#[derive(Debug, Subcommand)]
pub enum FamilyCommand {
    /// Build E_{m,n} with its models and bad-prime classification.
    Construct(CurveArgs),
    /// List the n with squarefree delta_m(n).
    Sieve {
        #[arg(short)]
        m: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        sign: Option<Sign>,
        #[arg(long)]
        n_max: Option<u64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum TwistCommand {
    /// Certificate for a single d.
    Check {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(short, allow_hyphen_values = true)]
        d: Option<i64>,
    },
    /// Certificates for every candidate d up to x_max.
    Enumerate {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        x_max: Option<u64>,
    },
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[arg(long)]
    pub x_max: Option<u64>,
    /// Comma-separated checkpoints; defaults to powers of ten below x_max.
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Option<Vec<u64>>,
    /// Report the truncated squarefree sieve constant instead.
    #[arg(long)]
    pub sieve_constant: bool,
    #[arg(long, default_value_t = 1000)]
    pub p_max: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run only these suites.
    #[arg(long = "suite", value_parser = clap::builder::PossibleValuesParser::new(verify::SUITES))]
    pub suites: Vec<String>,
    #[arg(long)]
    pub l_max: Option<u64>,
    #[arg(long)]
    pub n_max: Option<u64>,
    #[arg(long)]
    pub disc_max: Option<i64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, hide = true)]
    pub inject_fault: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("oracle mismatches found")]
    Mismatch,
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Lib(e) => e.code(),
            CliError::Usage(_) => "Usage",
            CliError::Io(_) => "Io",
            CliError::Csv(_) => "Csv",
            CliError::Json(_) => "Json",
            CliError::Mismatch => "MismatchFound",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(Error::Config(_)) | CliError::Usage(_) => EXIT_USAGE,
            CliError::Lib(e) if e.is_mismatch() => EXIT_MISMATCH,
            CliError::Lib(_) => EXIT_REJECTED,
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) | CliError::Mismatch => EXIT_MISMATCH,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Serialize)]
struct ErrorDoc<'a> {
    error: &'a str,
    message: String,
}

/// Parse arguments, run, and return the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            if !matches!(e, CliError::Mismatch) {
                let doc = ErrorDoc { error: e.code(), message: e.to_string() };
                eprintln!("{}", serde_json::to_string(&doc).unwrap_or_default());
            }
            e.exit_code()
        }
    }
}

struct Ctx {
    cfg: RunConfig,
    format: Option<Format>,
    output: Option<PathBuf>,
}

impl Ctx {
    fn writer(&self) -> CliResult<Box<dyn Write>> {
        Ok(match &self.output {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn curve(&self, a: &CurveArgs) -> CliResult<FamilyParams> {
        let m = a.m.or(self.cfg.m).ok_or_else(|| CliError::Usage("-m is required".into()))?;
        let n = a.n.or(self.cfg.n).unwrap_or(0);
        let sign = a.sign.or(self.cfg.sign).ok_or_else(|| CliError::Usage("--sign is required".into()))?;
        Ok(FamilyParams::new(m, n, sign))
    }
}

pub fn run(cli: Cli) -> CliResult<()> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(t) = cli.threads.or(cfg.threads) {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        // A pool may already exist when embedded; keep it then.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let ctx = Ctx { format: cli.format.or(cfg.format), output: cli.output.clone().or(cfg.output.clone()), cfg };
    match cli.command {
        Command::Family(FamilyCommand::Construct(a)) => family_construct(&ctx, &a),
        Command::Family(FamilyCommand::Sieve { m, sign, n_max }) => family_sieve(&ctx, m, sign, n_max),
        Command::Twist(TwistCommand::Check { curve, d }) => twist_check(&ctx, &curve, d),
        Command::Twist(TwistCommand::Enumerate { curve, x_max }) => twist_enumerate(&ctx, &curve, x_max),
        Command::Density(a) => density(&ctx, &a),
        Command::Verify(a) => verify_cmd(&ctx, &a),
    }
}

fn write_json<T: Serialize>(w: &mut dyn Write, v: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *w, v)?;
    writeln!(w)?;
    Ok(())
}

fn family_construct(ctx: &Ctx, a: &CurveArgs) -> CliResult<()> {
    let curve = construct(ctx.curve(a)?)?;
    let mut w = ctx.writer()?;
    match ctx.format_or(Format::Json) {
        Format::Json => write_json(&mut w, &curve)?,
        Format::Csv => {
            let mut c = csv::Writer::from_writer(&mut w);
            c.write_record(["prime", "kind", "tamagawa_index", "criterion", "ord_discriminant"])?;
            for r in &curve.bad_primes {
                c.serialize((
                    r.prime.to_string(),
                    r.kind,
                    r.tamagawa_index,
                    r.criterion,
                    r.ord_discriminant,
                ))?;
            }
            c.flush()?;
        }
        Format::Text => write_curve_text(&mut w, &curve)?,
    }
    w.flush()?;
    Ok(())
}

fn write_curve_text(w: &mut dyn Write, c: &FamilyCurve) -> CliResult<()> {
    writeln!(w, "{}", c.params)?;
    writeln!(w, "  A = {}  H = {}  J = {}", c.a, c.h, c.j)?;
    writeln!(w, "  delta = {}  conductor = {}", c.discriminant, c.conductor)?;
    let a: Vec<String> = c.minimal_model.coefficients().iter().map(|v| v.to_string()).collect();
    writeln!(w, "  minimal model [{}]", a.join(", "))?;
    for r in &c.bad_primes {
        writeln!(w, "  {:>12} {:?} c = {:?}", r.prime, r.kind, r.tamagawa_index)?;
    }
    Ok(())
}

fn family_sieve(ctx: &Ctx, m: Option<u32>, sign: Option<Sign>, n_max: Option<u64>) -> CliResult<()> {
    let m = m.or(ctx.cfg.m).ok_or_else(|| CliError::Usage("-m is required".into()))?;
    let sign = sign.or(ctx.cfg.sign).ok_or_else(|| CliError::Usage("--sign is required".into()))?;
    let n_max = n_max.or(ctx.cfg.n_max).ok_or_else(|| CliError::Usage("--n-max is required".into()))?;
    let r = sieve_n(m, sign, n_max)?;
    let mut w = ctx.writer()?;
    match ctx.format_or(Format::Csv) {
        Format::Json => write_json(&mut w, &r)?,
        Format::Csv => {
            let mut c = csv::Writer::from_writer(&mut w);
            c.write_record(["m", "sign", "n"])?;
            for n in &r.admissible {
                c.write_record([m.to_string(), sign.to_string(), n.to_string()])?;
            }
            c.flush()?;
        }
        Format::Text => {
            writeln!(w, "m = {m} {sign}: {} admissible n <= {n_max}", r.admissible.len())?;
            writeln!(w, "density {} = {:.6}", crate::num_str::format_ratio(&r.density), r.density_f64())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub const CERT_CSV_HEADER: [&str; 17] = [
    "d",
    "positive",
    "squarefree",
    "coprime_to_delta",
    "mod3",
    "mod4_or_8",
    "per_prime_table",
    "class_number_3free",
    "torsion_trivial",
    "root_number_minus_one",
    "S",
    "root_number",
    "narrow_class_number",
    "selmer3",
    "selmer3_infinity",
    "conditional_rank_one",
    "failed_checks",
];

fn cert_record(c: &TwistCertificate) -> Vec<String> {
    let opt = |v: Option<String>| v.unwrap_or_default();
    let mut rec = vec![c.d.to_string()];
    rec.extend(c.checks.named().iter().map(|(_, ok)| ok.to_string()));
    rec.push(opt(c.split_count.map(|v| v.to_string())));
    rec.push(opt(c.root_number.map(|v| v.to_string())));
    rec.push(opt(c.narrow_class_number.map(|v| v.to_string())));
    rec.push(opt(c.selmer3.clone()));
    rec.push(opt(c.selmer3_infinity.clone()));
    rec.push(c.conditional_rank_one.to_string());
    rec.push(c.failed_checks.join(";"));
    rec
}

fn cert_text(c: &TwistCertificate) -> String {
    if c.failed_checks.is_empty() {
        format!("d = {}: Sel3 = {}, root number -1, h+ = {}", c.d, SEL3_TEXT, c.narrow_class_number.unwrap_or(0))
    } else {
        format!("d = {}: rejected ({})", c.d, c.failed_checks.join(", "))
    }
}

const SEL3_TEXT: &str = crate::twist::SELMER3;

fn twist_check(ctx: &Ctx, a: &CurveArgs, d: Option<i64>) -> CliResult<()> {
    let d = d.or(ctx.cfg.d).ok_or_else(|| CliError::Usage("-d is required".into()))?;
    let curve = construct(ctx.curve(a)?)?;
    let cert = TwistContext::new(curve)?.check(d)?;
    let mut w = ctx.writer()?;
    match ctx.format_or(Format::Json) {
        Format::Json => write_json(&mut w, &cert)?,
        Format::Csv => {
            let mut c = csv::Writer::from_writer(&mut w);
            c.write_record(CERT_CSV_HEADER)?;
            c.write_record(cert_record(&cert))?;
            c.flush()?;
        }
        Format::Text => writeln!(w, "{}", cert_text(&cert))?,
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct EnumerationSummary {
    pub curve: FamilyParams,
    pub x_max: u64,
    pub candidates: u64,
    pub admissible: u64,
    pub rejected: u64,
}

#[derive(Serialize)]
struct Footer<'a> {
    summary: &'a EnumerationSummary,
}

fn twist_enumerate(ctx: &Ctx, a: &CurveArgs, x_max: Option<u64>) -> CliResult<()> {
    let x_max = x_max.or(ctx.cfg.x_max).ok_or_else(|| CliError::Usage("--x-max is required".into()))?;
    let curve = construct(ctx.curve(a)?)?;
    let tc = TwistContext::new(curve)?;
    let candidates = tc.rule.candidates(x_max);
    let mut summary = EnumerationSummary {
        curve: tc.curve.params,
        x_max,
        candidates: candidates.len() as u64,
        admissible: 0,
        rejected: 0,
    };
    let mut w = ctx.writer()?;
    let mut stream = |emit: &mut dyn FnMut(&TwistCertificate) -> CliResult<()>| -> CliResult<()> {
        for chunk in candidates.chunks(CHUNK) {
            let certs: Vec<TwistCertificate> =
                chunk.par_iter().map(|&d| tc.check(d)).collect::<crate::Result<_>>()?;
            for cert in &certs {
                if cert.checks.all() {
                    summary.admissible += 1;
                } else {
                    summary.rejected += 1;
                }
                emit(cert)?;
            }
        }
        Ok(())
    };
    match ctx.format_or(Format::Json) {
        Format::Json => {
            stream(&mut |cert| {
                serde_json::to_writer(&mut w, cert)?;
                writeln!(w)?;
                Ok(())
            })?;
            serde_json::to_writer(&mut w, &Footer { summary: &summary })?;
            writeln!(w)?;
        }
        Format::Csv => {
            let mut c = csv::Writer::from_writer(&mut w);
            c.write_record(CERT_CSV_HEADER)?;
            stream(&mut |cert| Ok(c.write_record(cert_record(cert))?))?;
            c.flush()?;
        }
        Format::Text => {
            stream(&mut |cert| Ok(writeln!(w, "{}", cert_text(cert))?))?;
            writeln!(
                w,
                "{} candidates, {} admissible, {} rejected",
                summary.candidates, summary.admissible, summary.rejected
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

pub const DENSITY_CSV_HEADER: [&str; 7] = [
    "x",
    "congruence_count",
    "class_number_filtered",
    "fully_admissible",
    "filter_ratio",
    "congruence_density",
    "fully_admissible_density",
];

fn density_rows(r: &DensityReport) -> Vec<Vec<String>> {
    r.checkpoints
        .iter()
        .map(|c| {
            vec![
                c.x.to_string(),
                c.congruence_count.to_string(),
                c.class_number_filtered.to_string(),
                c.fully_admissible.to_string(),
                c.filter_ratio.map(|v| format!("{v:.6}")).unwrap_or_default(),
                format!("{:.8}", c.congruence_density),
                format!("{:.8}", c.fully_admissible_density),
            ]
        })
        .collect()
}

fn density(ctx: &Ctx, a: &DensityArgs) -> CliResult<()> {
    let mut w = ctx.writer()?;
    if a.sieve_constant {
        let m = a.curve.m.or(ctx.cfg.m).ok_or_else(|| CliError::Usage("-m is required".into()))?;
        let sign = a.curve.sign.or(ctx.cfg.sign).unwrap_or(Sign::Minus);
        let c = sieve_constant(m, sign, a.p_max)?;
        match ctx.format_or(Format::Json) {
            Format::Json => write_json(&mut w, &c)?,
            Format::Csv => {
                let mut cw = csv::Writer::from_writer(&mut w);
                cw.write_record(["prime", "beta"])?;
                for f in &c.factors {
                    cw.write_record([f.prime.to_string(), f.beta.to_string()])?;
                }
                cw.flush()?;
            }
            Format::Text => writeln!(w, "sieve constant m = {m} {sign}, p <= {}: {:.8}", c.p_max, c.value)?,
        }
        w.flush()?;
        return Ok(());
    }
    let given = a.checkpoints.clone().or(ctx.cfg.checkpoints.clone());
    let x_max = a
        .x_max
        .or(ctx.cfg.x_max)
        .or_else(|| given.as_ref().and_then(|v| v.iter().copied().max()))
        .ok_or_else(|| CliError::Usage("--x-max or --checkpoints is required".into()))?;
    let mut xs = given.unwrap_or_else(|| checkpoints_for(x_max));
    xs.retain(|&x| x <= x_max);
    if xs.last() != Some(&x_max) {
        xs.push(x_max);
    }
    let curve = construct(ctx.curve(&a.curve)?)?;
    let report = empirical_density_at(&curve, &xs)?;
    match ctx.format_or(Format::Json) {
        Format::Json => write_json(&mut w, &report)?,
        Format::Csv => {
            let mut cw = csv::Writer::from_writer(&mut w);
            cw.write_record(DENSITY_CSV_HEADER)?;
            for row in density_rows(&report) {
                cw.write_record(row)?;
            }
            cw.flush()?;
        }
        Format::Text => {
            writeln!(w, "{} modulus {} ({} classes)", report.curve, report.modulus, report.class_count)?;
            writeln!(w, "taya bound {} = {:.6e}", report.taya_bound, report.taya_bound_decimal)?;
            for row in density_rows(&report) {
                writeln!(w, "{}", row.join("\t"))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn verify_cmd(ctx: &Ctx, a: &VerifyArgs) -> CliResult<()> {
    let mut opts = VerifyOptions::default();
    if !a.suites.is_empty() {
        opts.suites = a.suites.clone();
    }
    if let Some(v) = a.l_max {
        opts.l_max = v;
    }
    if let Some(v) = a.n_max.or(ctx.cfg.n_max) {
        opts.n_max = v;
    }
    if let Some(v) = a.disc_max {
        opts.disc_max = v;
    }
    if let Some(v) = a.seed {
        opts.seed = v;
    }
    if let Some(v) = ctx.cfg.sieve_tolerance {
        opts.sieve_tolerance = v;
    }
    opts.inject_fault = a.inject_fault.clone();
    let report = verify::run(&opts)?;
    let mut w = ctx.writer()?;
    match ctx.format_or(Format::Text) {
        Format::Json => write_json(&mut w, &report)?,
        Format::Csv => write_verify_csv(&mut w, &report)?,
        Format::Text => write_verify_text(&mut w, &report)?,
    }
    w.flush()?;
    if report.ok {
        Ok(())
    } else {
        Err(CliError::Mismatch)
    }
}

fn write_verify_csv(w: &mut dyn Write, r: &VerifyReport) -> CliResult<()> {
    let mut c = csv::Writer::from_writer(w);
    c.write_record(["suite", "checked", "passed", "mismatches", "seconds"])?;
    for s in &r.suites {
        c.write_record([
            s.name.clone(),
            s.checked.to_string(),
            s.passed.to_string(),
            s.mismatches.len().to_string(),
            format!("{:.3}", s.seconds),
        ])?;
    }
    c.flush()?;
    Ok(())
}

fn write_verify_text(w: &mut dyn Write, r: &VerifyReport) -> CliResult<()> {
    for s in &r.suites {
        let status = if s.ok() { "ok" } else { "MISMATCH" };
        writeln!(w, "{:<22} {:>7}/{:<7} {status}", s.name, s.passed, s.checked)?;
        for m in &s.mismatches {
            writeln!(w, "    {m}")?;
        }
        if !s.rows.is_empty() {
            writeln!(w, "    {:<22} {:>8} {:>7} {:>9} {:>7} agree", "curve", "prime", "rule", "algebraic", "count")?;
            for row in &s.rows {
                let count = row.point_count.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
                writeln!(
                    w,
                    "    {:<22} {:>8} {:>7} {:>9} {:>7} {}",
                    row.curve.to_string(),
                    row.prime,
                    row.family_rule,
                    row.algebraic,
                    count,
                    row.agree()
                )?;
            }
        }
    }
    writeln!(w, "{}", if r.ok { "all suites agree" } else { "mismatches found" })?;
    Ok(())
}
