//! The `mublab` command line.
//!
//! Exit codes: 0 success, 1 validation or check failure, 2 closure cap
//! exceeded, 3 input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::grouplab::{self, compare_fingerprints, fingerprint, Certificate, Fingerprint, DEFAULT_CAP};
use crate::io;
use crate::matcore::ToleranceConfig;
use crate::mcc::{validate_mcc, MccValue};
use crate::mub::{self, validate_mub};
use crate::pauli::gamma_inverse;
use crate::report::ValidationReport;
use crate::symplectic::{canonical_form, desarguesian_spread, enumerate_spreads, validate_spread, Spread};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_CAP: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "mublab", version, about = "MUBs, maximal commuting classes and their groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Prime field size.
    #[arg(long, global = true)]
    d: Option<u32>,
    /// Number of qudits.
    #[arg(long = "N", global = true)]
    n: Option<usize>,
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Closure cap (elements).
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Equality tolerance override.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a spread or its Pauli MCC.
    Construct {
        kind: ConstructKind,
        /// Use the k-th enumerated spread instead of the Desarguesian one.
        #[arg(long)]
        spread_index: Option<usize>,
    },
    /// Apply alpha (MUB to MCC) or beta (MCC to MUB).
    Map { direction: Direction },
    /// Validate a file.
    Verify { kind: VerifyKind },
    /// Group closure, invariants, height and fingerprint of an MCC.
    Analyze,
    /// Two non-isomorphic MCCs with the same image under beta.
    DemoBetaNoninjective,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ConstructKind {
    Spread,
    PauliMcc,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Direction {
    Alpha,
    Beta,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum VerifyKind {
    Mub,
    Mcc,
    Spread,
}

/// A failed command: exit code plus message for stderr.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded(_) => EXIT_CAP,
            Error::InvalidSpread(_)
            | Error::NonCommuting(_)
            | Error::NonUnitary(_)
            | Error::ResidualBlock(_)
            | Error::InvalidMcc(_)
            | Error::InvalidMub(_) => EXIT_FAILED,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

type CmdResult = std::result::Result<i32, Failure>;

struct Ctx {
    d: Option<u32>,
    n: Option<usize>,
    input: Option<PathBuf>,
    out: Option<PathBuf>,
    cap: usize,
    cfg: ToleranceConfig,
    format: Format,
}

impl Ctx {
    fn d_n(&self) -> std::result::Result<(u32, usize), Failure> {
        match (self.d, self.n) {
            (Some(d), Some(n)) => Ok((d, n)),
            _ => Err(input_error("--d and --N are required")),
        }
    }

    fn read_input(&self) -> std::result::Result<String, Failure> {
        let path = self.input.as_deref().ok_or_else(|| input_error("--in is required"))?;
        fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
    }

    fn emit(&self, text: &str) -> std::result::Result<(), Failure> {
        match &self.out {
            Some(p) => write_file(p, text),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes()).map_err(|e| input_error(e.to_string()))
            }
        }
    }

    fn emit_report<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> std::result::Result<(), Failure> {
        match self.format {
            Format::Json => self.emit(&io::to_json(value)?),
            Format::Text => self.emit(&text()),
        }
    }
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

/// Parses `args` (program name first), runs the command, and returns the
/// exit code. Messages go to stderr, artifacts to `--out` or stdout.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let mut cfg = ToleranceConfig::default();
    if let Some(t) = cli.tol {
        cfg.eq_tol = t;
    }
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return EXIT_INPUT;
    }
    if cli.cap == 0 {
        eprintln!("error: --cap must be positive");
        return EXIT_INPUT;
    }
    let ctx = Ctx { d: cli.d, n: cli.n, input: cli.input, out: cli.out, cap: cli.cap, cfg, format: cli.format };
    let result = match cli.command {
        Command::Construct { kind, spread_index } => construct(&ctx, kind, spread_index),
        Command::Map { direction } => map(&ctx, direction),
        Command::Verify { kind } => verify(&ctx, kind),
        Command::Analyze => analyze(&ctx),
        Command::DemoBetaNoninjective => demo(&ctx),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn build_spread(d: u32, n: usize, index: Option<usize>) -> std::result::Result<Spread, Failure> {
    match index {
        None => Ok(desarguesian_spread(d, n)?),
        Some(k) => {
            let form = canonical_form(d, n)?;
            let all = enumerate_spreads(&form, k + 1)?;
            all.into_iter().nth(k).ok_or_else(|| input_error(format!("fewer than {} spreads", k + 1)))
        }
    }
}

fn construct(ctx: &Ctx, kind: ConstructKind, index: Option<usize>) -> CmdResult {
    let (d, n) = ctx.d_n()?;
    let spread = build_spread(d, n, index)?;
    let text = match kind {
        ConstructKind::Spread => io::spread_to_json(&spread)?,
        ConstructKind::PauliMcc => io::symbolic_mcc_to_json(&gamma_inverse(&spread)?)?,
    };
    ctx.emit(&text)?;
    Ok(EXIT_OK)
}

fn read_mcc(ctx: &Ctx) -> std::result::Result<MccValue, Failure> {
    Ok(io::mcc_from_json(&ctx.read_input()?)?)
}

fn map(ctx: &Ctx, direction: Direction) -> CmdResult {
    match direction {
        Direction::Beta => {
            let u = read_mcc(ctx)?;
            let report = validate_mcc(&u, &ctx.cfg);
            if !report.passed() {
                return Err(Failure { code: EXIT_FAILED, message: format!("input is not a valid MCC\n{report}") });
            }
            ctx.emit(&io::mub_to_json(&mub::beta(&u, &ctx.cfg)?)?)?;
        }
        Direction::Alpha => {
            let b = io::mub_from_json(&ctx.read_input()?)?;
            let report = validate_mub(&b, &ctx.cfg);
            if !report.passed() || !b.is_maximal() {
                return Err(Failure { code: EXIT_FAILED, message: format!("input is not a valid maximal MUB\n{report}") });
            }
            ctx.emit(&io::numeric_mcc_to_json(&mub::alpha(&b)?)?)?;
        }
    }
    Ok(EXIT_OK)
}

fn verify(ctx: &Ctx, kind: VerifyKind) -> CmdResult {
    let text = ctx.read_input()?;
    let report: ValidationReport = match kind {
        VerifyKind::Mub => validate_mub(&io::mub_from_json(&text)?, &ctx.cfg),
        VerifyKind::Mcc => validate_mcc(&io::mcc_from_json(&text)?, &ctx.cfg),
        VerifyKind::Spread => {
            let s = io::spread_from_json(&text)?;
            validate_spread(&canonical_form(s.prime().get(), s.n())?, &s)
        }
    };
    ctx.emit_report(&report, || format!("{report}\n"))?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAILED })
}

fn analyze(ctx: &Ctx) -> CmdResult {
    let u = read_mcc(ctx)?;
    let report = validate_mcc(&u, &ctx.cfg);
    if !report.passed() {
        return Err(Failure { code: EXIT_FAILED, message: format!("input is not a valid MCC\n{report}") });
    }
    let a = grouplab::analyze(&u, ctx.cap)?;
    ctx.emit_report(&a, || {
        format!(
            "order: {}\nexponent: {}\ncenter order: {}\nnilpotence class: {}\nheight: {}\nprojective orders: {}\n\
             projective closure order: {}\n",
            a.order,
            a.exponent,
            a.center_order,
            a.nilpotence_class,
            a.height,
            a.fingerprint.multiset_string(),
            a.fingerprint.projective_closure_order
        )
    })?;
    Ok(if a.cap_exceeded() { EXIT_CAP } else { EXIT_OK })
}

/// Outcome of the beta non-injectivity pipeline.
#[derive(Clone, Debug, Serialize)]
pub struct DemoReport {
    pub d: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub mub_equal: bool,
    pub mub_distance: Option<f64>,
    pub certificate: Certificate,
    pub fingerprint_pauli: Fingerprint,
    pub fingerprint_alpha: Fingerprint,
    pub passed: bool,
}

/// `U1 = γ⁻¹(S)`, `B = β(U1)`, `U2 = α(B)`; checks `β(U2) = B` and looks
/// for a fingerprint separating `U1` from `U2`.
pub fn beta_noninjective_demo(d: u32, n: usize, cap: usize, cfg: &ToleranceConfig) -> crate::Result<DemoReport> {
    if d % 2 == 0 {
        return Err(Error::InvalidParameter("the demo needs an odd prime d".into()));
    }
    if n < 2 {
        return Err(Error::InvalidParameter("the demo needs N >= 2".into()));
    }
    if (d as u64).pow(n as u32) > 9 {
        return Err(Error::GuardViolation(format!("d^N = {}^{} exceeds 9", d, n)));
    }
    let u1: MccValue = gamma_inverse(&desarguesian_spread(d, n)?)?.into();
    let b = mub::beta(&u1, cfg)?;
    let u2: MccValue = mub::alpha(&b)?.into();
    let b2 = mub::beta(&u2, cfg)?;
    let mub_distance = mub::mub_distance(&b, &b2, cfg);
    let mub_equal = mub::mub_equal(&b, &b2, cfg);
    let f1 = fingerprint(&u1, cap)?;
    let f2 = fingerprint(&u2, cap)?;
    let certificate = compare_fingerprints(&f1, &f2);
    let passed = mub_equal && certificate.is_certificate();
    Ok(DemoReport {
        d,
        n,
        mub_equal,
        mub_distance,
        certificate,
        fingerprint_pauli: f1,
        fingerprint_alpha: f2,
        passed,
    })
}

fn demo(ctx: &Ctx) -> CmdResult {
    let (d, n) = ctx.d_n()?;
    let r = beta_noninjective_demo(d, n, ctx.cap, &ctx.cfg)?;
    ctx.emit_report(&r, || {
        format!(
            "beta images equal: {}\ncertificate: {}\nPauli MCC projective orders: {}\nalpha MCC projective orders: {}\n",
            r.mub_equal,
            r.certificate,
            r.fingerprint_pauli.multiset_string(),
            r.fingerprint_alpha.multiset_string()
        )
    })?;
    Ok(if r.passed { EXIT_OK } else { EXIT_FAILED })
}
