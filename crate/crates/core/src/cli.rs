//! Command-line front end: `components`, `torsion`, `asymptotics` and
//! `verify` (an alias of `torsion --method both`).
//!
//! Exit codes: 0 success, 1 other failure, 2 invalid parameters, 3 wrong
//! parity, 4 not acyclic or undecidable rank, 5 methods disagree, 6 squeeze
//! bound violated.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{debug, info, warn};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::asymptotics::{
    self, squeeze_bounds, verify_convergence, Method, NormalizedSequence, TorsionResult,
};
use crate::error::Error;
use crate::knot::{Component, Parity, TorusKnot};
use crate::sl2::Sl2Rep;
use crate::tolerance::MAX_GENERIC_N;
use crate::twisted::PrecisionPolicy;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_WRONG_PARITY: i32 = 3;
pub const EXIT_NOT_ACYCLIC: i32 = 4;
pub const EXIT_DISAGREEMENT: i32 = 5;
pub const EXIT_BOUND_VIOLATED: i32 = 6;

/// Agreement required between methods unless `--tolerance` says otherwise.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Tried in order; a value whose meridian trace is excluded is skipped.
pub const DEFAULT_T_PARAMS: [Complex64; 3] = [
    Complex64::new(-1.0, 0.0),
    Complex64::new(2.0, 0.0),
    Complex64::new(3.0, 1.0),
];

#[derive(Parser, Debug)]
#[command(
    name = "torsionknot",
    version,
    about = "Higher even-dimensional Reidemeister torsion of torus knot exteriors"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the components of the SL(2,C) character variety.
    Components(KnotArgs),
    /// Torsion for N in a range by the chosen method.
    Torsion(RunArgs),
    /// Normalized log-torsion against its squeeze bounds (closed form).
    Asymptotics(RunArgs),
    /// Generic algorithm against the closed form.
    Verify(RunArgs),
}

#[derive(Args, Debug, Clone)]
pub struct KnotArgs {
    #[arg(short, allow_negative_numbers = true)]
    pub p: i64,
    #[arg(short, allow_negative_numbers = true)]
    pub q: i64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(short, allow_negative_numbers = true)]
    pub p: i64,
    #[arg(short, allow_negative_numbers = true)]
    pub q: i64,
    #[arg(
        short,
        allow_negative_numbers = true,
        requires = "b",
        conflicts_with = "all_odd"
    )]
    pub a: Option<i64>,
    #[arg(short, allow_negative_numbers = true, requires = "a")]
    pub b: Option<i64>,
    /// Every odd component of the knot.
    #[arg(long)]
    pub all_odd: bool,
    #[arg(long = "min-N", default_value_t = 1)]
    pub min_n: usize,
    #[arg(long = "max-N", default_value_t = 8)]
    pub max_n: usize,
    #[arg(long, value_enum, default_value_t = MethodChoice::Closed)]
    pub method: MethodChoice,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Comma-separated complex parameters such as `-1,2,3+i`.
    #[arg(long = "t-params", value_delimiter = ',', allow_hyphen_values = true)]
    pub t_params: Vec<String>,
    /// Agreement tolerance for `--method both`.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    Closed,
    Generic,
    Structured,
    Both,
}

impl MethodChoice {
    fn needs_odd(self) -> bool {
        self != MethodChoice::Generic
    }

    fn needs_rep(self) -> bool {
        self != MethodChoice::Closed
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Selection {
    Component { a: i64, b: i64 },
    AllOdd,
}

/// A validated invocation of `torsion`, `verify` or `asymptotics`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub p: i64,
    pub q: i64,
    pub selection: Selection,
    pub min_n: usize,
    pub max_n: usize,
    pub method: MethodChoice,
    pub t_params: Vec<Complex64>,
    pub format: Format,
    pub tolerance: f64,
}

/// An error with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonCoprime { .. } | Error::OutOfRange { .. } | Error::BadParameter(_) => EXIT_USAGE,
        Error::WrongParity { .. } => EXIT_WRONG_PARITY,
        Error::NotAcyclic { .. } | Error::RankIndeterminate { .. } => EXIT_NOT_ACYCLIC,
        Error::BoundViolated { .. } => EXIT_BOUND_VIOLATED,
        _ => EXIT_FAILURE,
    }
}

impl RunConfig {
    pub fn from_args(args: &RunArgs, method: MethodChoice) -> Result<Self, Failure> {
        let selection = match (args.a, args.b, args.all_odd) {
            (Some(a), Some(b), false) => Selection::Component { a, b },
            (None, None, true) => Selection::AllOdd,
            _ => return Err(Failure::usage("give either -a and -b, or --all-odd")),
        };
        if args.min_n == 0 || args.min_n > args.max_n {
            return Err(Failure::usage(format!(
                "need 1 <= --min-N <= --max-N (got {} and {})",
                args.min_n, args.max_n
            )));
        }
        if matches!(
            method,
            MethodChoice::Generic | MethodChoice::Structured | MethodChoice::Both
        ) && args.max_n > MAX_GENERIC_N
        {
            return Err(Failure::usage(format!(
                "--max-N {} exceeds the limit {MAX_GENERIC_N} of the determinant methods",
                args.max_n
            )));
        }
        let t_params = if args.t_params.is_empty() {
            DEFAULT_T_PARAMS.to_vec()
        } else {
            args.t_params
                .iter()
                .map(|s| {
                    s.trim()
                        .parse::<Complex64>()
                        .map_err(|_| Failure::usage(format!("cannot parse t-parameter {s:?}")))
                })
                .collect::<Result<_, _>>()?
        };
        let tolerance = args.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        if !(tolerance > 0.0) {
            return Err(Failure::usage("--tolerance must be positive"));
        }
        Ok(RunConfig {
            p: args.p,
            q: args.q,
            selection,
            min_n: args.min_n,
            max_n: args.max_n,
            method,
            t_params,
            format: args.format,
            tolerance,
        })
    }

    pub fn knot(&self) -> Result<TorusKnot, Failure> {
        Ok(TorusKnot::new(self.p, self.q)?)
    }

    pub fn components(&self) -> Result<Vec<Component>, Failure> {
        let knot = self.knot()?;
        Ok(match self.selection {
            Selection::Component { a, b } => vec![knot.component(a, b)?],
            Selection::AllOdd => knot.odd_components(),
        })
    }
}

/// `TORSIONKNOT_LOG` sets the log filter (`warn` by default).
pub fn init_logging() {
    let env = env_logger::Env::new().filter_or("TORSIONKNOT_LOG", "warn");
    let _ = env_logger::Builder::from_env(env)
        .format_timestamp(None)
        .try_init();
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:?}")
    }
}

fn format_opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Components(k) => cmd_components(k, out),
        Command::Torsion(r) => RunConfig::from_args(r, r.method).and_then(|c| cmd_torsion(&c, out)),
        Command::Verify(r) => {
            RunConfig::from_args(r, MethodChoice::Both).and_then(|c| cmd_torsion(&c, out))
        }
        Command::Asymptotics(r) => {
            RunConfig::from_args(r, MethodChoice::Closed).and_then(|c| cmd_asymptotics(&c, out))
        }
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_FAILURE,
        message: format!("write failed: {e}"),
    }
}

fn knot_meta(knot: &TorusKnot) -> serde_json::Value {
    json!({
        "p": knot.p(),
        "q": knot.q(),
        "r": knot.r(),
        "s": knot.s(),
        "convention": "s = p^-1 mod q in (0, q), r = (p s - 1) / q",
    })
}

pub fn cmd_components(args: &KnotArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let knot = TorusKnot::new(args.p, args.q)?;
    let comps = knot.components();
    match args.format {
        Format::Csv => {
            let mut s = String::from("a,b,parity,central_sign,acyclic_for_all_N\n");
            for c in &comps {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    c.a(),
                    c.b(),
                    c.parity(),
                    c.central_sign(),
                    c.is_acyclic()
                );
            }
            out.write_all(s.as_bytes()).map_err(io_failure)?;
        }
        Format::Json => {
            let rows: Vec<_> = comps
                .iter()
                .map(|c| {
                    json!({
                        "a": c.a(),
                        "b": c.b(),
                        "parity": c.parity(),
                        "central_sign": c.central_sign(),
                        "acyclic_for_all_N": c.is_acyclic(),
                    })
                })
                .collect();
            let doc = json!({
                "meta": { "command": "components", "knot": knot_meta(&knot), "count": comps.len() },
                "rows": rows,
            });
            writeln!(out, "{doc}").map_err(io_failure)?;
        }
    }
    Ok(())
}

/// One output record of `torsion`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorsionRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<u32>,
    #[serde(rename = "N")]
    pub n: usize,
    pub dim: usize,
    pub method: Method,
    pub torsion_re: Option<f64>,
    pub torsion_im: Option<f64>,
    pub log_abs: f64,
    pub normalized: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<f64>,
}

impl TorsionRow {
    fn new(c: &Component, all_odd: bool, r: &TorsionResult, agreement: Option<f64>) -> Self {
        TorsionRow {
            a: all_odd.then(|| c.a()),
            b: all_odd.then(|| c.b()),
            n: r.n,
            dim: r.dim,
            method: r.method,
            torsion_re: r.value.map(|z| z.re),
            torsion_im: r.value.map(|z| z.im),
            log_abs: r.log_abs,
            normalized: r.normalized,
            agreement,
        }
    }

    fn csv(&self) -> String {
        let mut s = String::new();
        if let (Some(a), Some(b)) = (self.a, self.b) {
            let _ = write!(s, "{a},{b},");
        }
        let _ = write!(
            s,
            "{},{},{},{},{},{},{}",
            self.n,
            self.dim,
            self.method,
            format_opt(self.torsion_re),
            format_opt(self.torsion_im),
            format_float(self.log_abs),
            format_float(self.normalized)
        );
        if let Some(g) = self.agreement {
            let _ = write!(s, ",{}", format_float(g));
        }
        s
    }
}

pub fn torsion_header(all_odd: bool, both: bool) -> String {
    let mut s = String::new();
    if all_odd {
        s.push_str("a,b,");
    }
    s.push_str("N,dim,method,torsion_re,torsion_im,log_abs,normalized");
    if both {
        s.push_str(",agreement");
    }
    s
}

/// The first parameter in `t_params` whose representation can be built.
pub fn choose_rep(c: &Component, t_params: &[Complex64]) -> Result<Sl2Rep, Failure> {
    for &t in t_params {
        match Sl2Rep::build(c, t) {
            Ok(rep) => {
                info!("component {c}: using t = {t}");
                return Ok(rep);
            }
            Err(e @ Error::ExcludedTrace { .. }) => warn!("component {c}: t = {t} rejected: {e}"),
            Err(e) => return Err(e.into()),
        }
    }
    Err(Failure {
        code: EXIT_FAILURE,
        message: format!("no usable t-parameter for component {c}"),
    })
}

struct Emitter<'a> {
    out: &'a mut dyn Write,
    format: Format,
    rows: Vec<serde_json::Value>,
}

impl Emitter<'_> {
    fn line(&mut self, line: &str) -> Result<(), Failure> {
        if self.format == Format::Csv {
            writeln!(self.out, "{line}").map_err(io_failure)?;
        }
        Ok(())
    }

    fn row<T: Serialize>(&mut self, csv: String, row: &T) -> Result<(), Failure> {
        match self.format {
            Format::Csv => self.line(&csv),
            Format::Json => {
                self.rows
                    .push(serde_json::to_value(row).expect("rows serialize"));
                Ok(())
            }
        }
    }

    fn finish(self, meta: serde_json::Value) -> Result<(), Failure> {
        if self.format == Format::Json {
            let doc = json!({ "meta": meta, "rows": self.rows });
            writeln!(self.out, "{doc}").map_err(io_failure)?;
        }
        Ok(())
    }
}

fn config_meta(
    command: &str,
    cfg: &RunConfig,
    knot: &TorusKnot,
) -> serde_json::Map<String, serde_json::Value> {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(command));
    m.insert("knot".into(), knot_meta(knot));
    m.insert(
        "config".into(),
        serde_json::to_value(cfg).expect("config serializes"),
    );
    m
}

pub fn cmd_torsion(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), Failure> {
    let knot = cfg.knot()?;
    let comps = cfg.components()?;
    let all_odd = cfg.selection == Selection::AllOdd;
    let both = cfg.method == MethodChoice::Both;
    let policy = PrecisionPolicy::default();
    let mut meta = config_meta("torsion", cfg, &knot);
    meta.insert(
        "tolerances".into(),
        json!({ "agreement": cfg.tolerance, "precision": policy }),
    );
    let mut em = Emitter {
        out,
        format: cfg.format,
        rows: Vec::new(),
    };
    em.line(&torsion_header(all_odd, both))?;
    let mut chosen = Vec::new();
    let mut disagreements = 0usize;
    let result = (|| -> Result<(), Failure> {
        for c in &comps {
            if cfg.method.needs_odd() && c.parity() == Parity::Even {
                return Err(Failure::from(Error::WrongParity { a: c.a(), b: c.b() }));
            }
            let rep = if cfg.method.needs_rep() {
                let rep = choose_rep(c, &cfg.t_params)?;
                chosen.push(json!({ "a": c.a(), "b": c.b(), "t": [rep.t().re, rep.t().im] }));
                Some(rep)
            } else {
                None
            };
            for n in cfg.min_n..=cfg.max_n {
                let closed = || asymptotics::torsion_closed_form(c, n);
                let det = |m| asymptotics::torsion(rep.as_ref().expect("rep built"), n, m, &policy);
                let rows: Vec<(TorsionResult, Option<f64>)> = match cfg.method {
                    MethodChoice::Closed => vec![(closed()?, None)],
                    MethodChoice::Generic => vec![(det(Method::Generic)?, None)],
                    MethodChoice::Structured => vec![(det(Method::Structured)?, None)],
                    MethodChoice::Both => {
                        let g = det(Method::Generic)?;
                        let cf = closed()?;
                        let d = g.relative_difference(&cf);
                        if !(d <= cfg.tolerance) {
                            warn!("component {c}, N = {n}: methods differ by {d:e}");
                            disagreements += 1;
                        }
                        vec![(g, Some(d)), (cf, Some(d))]
                    }
                };
                for (r, agreement) in rows {
                    debug!("component {c}, N = {n}, {}: bits {}", r.method, r.bits);
                    let row = TorsionRow::new(c, all_odd, &r, agreement);
                    em.row(row.csv(), &row)?;
                }
            }
        }
        Ok(())
    })();
    meta.insert("t_used".into(), json!(chosen));
    meta.insert("disagreements".into(), json!(disagreements));
    if let Err(f) = &result {
        meta.insert(
            "error".into(),
            json!({ "code": f.code, "message": f.message }),
        );
    }
    em.finish(serde_json::Value::Object(meta))?;
    result?;
    if disagreements > 0 {
        return Err(Failure {
            code: EXIT_DISAGREEMENT,
            message: format!(
                "{disagreements} value(s) disagree beyond {}",
                format_float(cfg.tolerance)
            ),
        });
    }
    Ok(())
}

/// One output record of `asymptotics`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqueezeRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<u32>,
    #[serde(rename = "N")]
    pub n: usize,
    pub normalized: f64,
    pub lo: f64,
    pub hi: f64,
}

pub fn cmd_asymptotics(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), Failure> {
    let knot = cfg.knot()?;
    let comps = cfg.components()?;
    let all_odd = cfg.selection == Selection::AllOdd;
    let mut meta = config_meta("asymptotics", cfg, &knot);
    let mut em = Emitter {
        out,
        format: cfg.format,
        rows: Vec::new(),
    };
    em.line(if all_odd {
        "a,b,N,normalized,lo,hi"
    } else {
        "N,normalized,lo,hi"
    })?;
    let mut summaries = Vec::new();
    let result = (|| -> Result<(), Failure> {
        for c in &comps {
            let seq = NormalizedSequence::new(c)?;
            for r in seq.take(cfg.max_n).skip(cfg.min_n - 1) {
                let (lo, hi) = squeeze_bounds(&knot, r.n);
                let row = SqueezeRow {
                    a: all_odd.then(|| c.a()),
                    b: all_odd.then(|| c.b()),
                    n: r.n,
                    normalized: r.normalized,
                    lo,
                    hi,
                };
                let prefix = if all_odd {
                    format!("{},{},", c.a(), c.b())
                } else {
                    String::new()
                };
                let csv = format!(
                    "{prefix}{},{},{},{}",
                    r.n,
                    format_float(r.normalized),
                    format_float(lo),
                    format_float(hi)
                );
                em.row(csv, &row)?;
            }
            let report = verify_convergence(c, cfg.max_n)?;
            em.line(&format!(
                "# summary a={} b={} worst_margin={} worst_N={} abs_normalized_N_max={} bound={}",
                c.a(),
                c.b(),
                format_float(report.worst_margin),
                report.worst_n,
                format_float(report.last_normalized.abs()),
                format_float(report.last_bound)
            ))?;
            summaries.push(json!({ "a": c.a(), "b": c.b(), "report": report }));
        }
        Ok(())
    })();
    meta.insert("summary".into(), json!(summaries));
    if let Err(f) = &result {
        meta.insert(
            "error".into(),
            json!({ "code": f.code, "message": f.message }),
        );
    }
    em.finish(serde_json::Value::Object(meta))?;
    result
}
