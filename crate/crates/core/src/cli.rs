//! Command-line front end. Every command returns its rendered output and an
//! exit code so that it can be driven from tests without a process.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::entropy::{
    entropy_compare, mahler_measure, padic_entropy, resolution_verdict, CountMode, EntropyReport,
};
use crate::error::{Error, Result};
use crate::expansive::{check_classical_n1, Verdict, DEFAULT_TOLERANCE};
use crate::padic::ConvergenceReport;
use crate::padic_det::{logdet_limit_estimate, logdet_matrix, LogdetRoutes};
use crate::quotients::{homology_at, FreeResolution, HomologySummary, IntMatrix, SubgroupSequence};
use crate::ring::{parse_poly, LaurentMatrix, LaurentPoly};
use crate::torsion::{torsion_rational, BasedComplex, TorsionReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NOT_EXPANSIVE: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;
pub const EXIT_INFINITE_HOMOLOGY: i32 = 5;
pub const EXIT_NON_CAUCHY: i32 = 6;

#[derive(Debug, Parser)]
#[command(name = "padent", version, about = "Euler characteristics, p-adic entropy and R-torsion of algebraic Z^N-actions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Series,
    Limit,
    #[default]
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Count {
    Euler,
    FixedPoints,
}

impl From<Count> for CountMode {
    fn from(c: Count) -> Self {
        match c {
            Count::Euler => CountMode::Euler,
            Count::FixedPoints => CountMode::FixedPoints,
        }
    }
}

/// Where the module comes from. Exactly one source must be given.
#[derive(Debug, Clone, Default, Args)]
pub struct InputArgs {
    /// Laurent polynomial, e.g. "4 - 3*t" or "3 + t1 + t2".
    pub input: Option<String>,
    /// Same as the positional polynomial.
    #[arg(long)]
    pub poly: Option<String>,
    /// JSON file holding a square matrix of polynomial strings.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// JSON file holding a free resolution `{"rank", "boundaries"}`.
    #[arg(long)]
    pub resolution: Option<PathBuf>,
    /// Number of variables; defaults to the largest one mentioned.
    #[arg(long)]
    pub rank: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SeqArgs {
    /// Use `Δ_n = nZ^N` for `n = 1..levels` unless `--seq` is given.
    #[arg(long, default_value_t = 12)]
    pub levels: u32,
    /// `diag:n=A..B[:STEP]`, `diag:n=a,b,c` or a JSON list of generator matrices.
    #[arg(long)]
    pub seq: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// p-adic (or, without --p, classical) expansiveness.
    Expansive {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        p: Option<u64>,
        /// Numeric band around |z| = 1 for the classical check.
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Euler characteristics and homology along a subgroup sequence.
    Euler {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// p-adic periodic-points entropy (equivalently the p-adic R-torsion).
    PadicEntropy {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 20)]
        precision: u32,
        /// Renormalize the Euler characteristic or the fixed-point count.
        #[arg(long, value_enum, default_value_t = Count::Euler)]
        count: Count,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Classical and p-adic entropies of Z[Γ]/(f) side by side.
    Compare {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 20)]
        precision: u32,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Mahler measure.
    Mahler {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Milnor torsion of an integer complex given as a JSON list of boundaries.
    Torsion {
        /// Inline JSON, e.g. "[[[6]]]".
        complex: Option<String>,
        /// JSON file with the boundaries.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// log_p det of a polynomial or matrix, by series, by limit, or both.
    Logdet {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 20)]
        precision: u32,
        #[arg(long, value_enum, default_value_t)]
        route: Route,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

/// Rendered output of one command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String, code: i32) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::InvalidSequence(_)
        | Error::InvalidPrime(_)
        | Error::ShapeMismatch(_)
        | Error::RankMismatch { .. }
        | Error::Io(_) => EXIT_PARSE,
        Error::NotExpansive(_) => EXIT_NOT_EXPANSIVE,
        Error::Inconclusive(_) => EXIT_INCONCLUSIVE,
        Error::InfiniteHomology { .. } | Error::ZeroDeterminant { .. } => EXIT_INFINITE_HOMOLOGY,
        _ => EXIT_FAILURE,
    }
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::NotExpansive { .. } => EXIT_NOT_EXPANSIVE,
            Verdict::Inconclusive { .. } => EXIT_INCONCLUSIVE,
            _ => EXIT_OK,
        }
    }
}

/// Caps rayon's pool at `PADENT_THREADS` when set. Later calls are no-ops.
pub fn init_threads() {
    if let Some(n) = std::env::var("PADENT_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome::ok(text, code)
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            }
        }
    }
}

pub fn run(cli: Cli) -> Outcome {
    match dispatch(cli.command) {
        Ok(o) => o,
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: exit_code(&e),
        },
    }
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Expansive { input, p, tol, format } => cmd_expansive(&input, p, tol, format),
        Command::Euler { input, seq, format } => cmd_euler(&input, &seq, format),
        Command::PadicEntropy {
            input,
            seq,
            p,
            precision,
            count,
            format,
        } => cmd_padic_entropy(&input, &seq, p, precision, count.into(), format),
        Command::Compare {
            input,
            seq,
            p,
            precision,
            format,
        } => cmd_compare(&input, &seq, p, precision, format),
        Command::Mahler { input, format } => cmd_mahler(&input, format),
        Command::Torsion { complex, matrix, format } => cmd_torsion(complex.as_deref(), matrix.as_ref(), format),
        Command::Logdet {
            input,
            seq,
            p,
            precision,
            route,
            format,
        } => cmd_logdet(&input, &seq, p, precision, route, format),
    }
}

/// Parses a polynomial, embedding it in `rank` variables when asked.
pub fn read_poly(s: &str, rank: Option<usize>) -> Result<LaurentPoly> {
    let f = parse_poly(s, None)?;
    match rank {
        Some(r) if r > f.rank() => f.embed(r),
        Some(r) if r < f.rank() => Err(Error::RankMismatch {
            expected: r,
            found: f.rank(),
        }),
        _ => Ok(f),
    }
}

/// Parses a JSON matrix of polynomial strings.
pub fn read_matrix(json: &str, rank: Option<usize>) -> Result<LaurentMatrix> {
    let rows: Vec<Vec<String>> = serde_json::from_str(json)?;
    let mut r = rank.unwrap_or(1);
    for s in rows.iter().flatten() {
        r = r.max(parse_poly(s, None)?.rank());
    }
    LaurentMatrix::parse_rows(&rows, r)
}

fn read_file(p: &PathBuf) -> Result<String> {
    std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
}

fn poly_source(input: &InputArgs) -> Result<Option<&str>> {
    match (&input.input, &input.poly) {
        (Some(_), Some(_)) => Err(parse_err("give the polynomial once")),
        (Some(s), None) | (None, Some(s)) => Ok(Some(s)),
        (None, None) => Ok(None),
    }
}

fn parse_err(msg: &str) -> Error {
    Error::Parse {
        pos: 0,
        msg: msg.into(),
    }
}

/// The resolution described by the input arguments.
pub fn load_resolution(input: &InputArgs) -> Result<FreeResolution> {
    let poly = poly_source(input)?;
    let given = [poly.is_some(), input.matrix.is_some(), input.resolution.is_some()];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(parse_err("give exactly one of a polynomial, --matrix or --resolution"));
    }
    if let Some(s) = poly {
        return FreeResolution::principal(LaurentMatrix::scalar(read_poly(s, input.rank)?));
    }
    if let Some(m) = &input.matrix {
        return FreeResolution::principal(read_matrix(&read_file(m)?, input.rank)?);
    }
    let r = FreeResolution::parse_json(&read_file(input.resolution.as_ref().expect("checked"))?)?;
    match input.rank {
        Some(n) if n != r.rank() => Err(Error::RankMismatch {
            expected: n,
            found: r.rank(),
        }),
        _ => Ok(r),
    }
}

fn load_poly(input: &InputArgs) -> Result<LaurentPoly> {
    if input.matrix.is_some() || input.resolution.is_some() {
        return Err(parse_err("this command takes a single polynomial"));
    }
    let s = poly_source(input)?.ok_or_else(|| parse_err("missing polynomial"))?;
    read_poly(s, input.rank)
}

pub fn load_sequence(seq: &SeqArgs, rank: usize) -> Result<SubgroupSequence> {
    match &seq.seq {
        Some(s) => SubgroupSequence::parse(s, rank),
        None => {
            if seq.levels == 0 {
                return Err(Error::InvalidSequence("--levels must be positive".into()));
            }
            SubgroupSequence::diagonal(rank, 1..=seq.levels as i64)
        }
    }
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_table(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn cmd_expansive(input: &InputArgs, p: Option<u64>, tol: f64, format: Format) -> Result<Outcome> {
    let verdict = match p {
        Some(p) => resolution_verdict(&load_resolution(input)?, p)?,
        None => check_classical_n1(&load_poly(input)?, tol)?,
    };
    let out = match format {
        Format::Json => json(&verdict)?,
        Format::Text => format!("{}: {}\n", verdict.kind(), verdict.witness().unwrap_or("")),
        Format::Csv => csv_table(
            &["kind", "exponent", "witness"],
            vec![vec![
                verdict.kind().into(),
                verdict.exponent().map(|e| e.to_string()).unwrap_or_default(),
                verdict.witness().unwrap_or("").into(),
            ]],
        )?,
    };
    Ok(Outcome::ok(out, verdict.exit_code()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EulerRow {
    pub index: u64,
    /// `χ` as `"a/b"` or `"a"`; absent when some homology is infinite.
    pub chi: Option<String>,
    pub homology: Option<HomologySummary>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EulerTable {
    pub rows: Vec<EulerRow>,
}

pub fn euler_table(f: &FreeResolution, seq: &SubgroupSequence) -> Result<EulerTable> {
    use rayon::prelude::*;
    let rows = seq
        .levels()
        .par_iter()
        .map(|delta| {
            let h = homology_at(f, delta)?;
            Ok(match h.euler_characteristic() {
                Ok(chi) => EulerRow {
                    index: delta.index(),
                    chi: Some(crate::serde_big::rational::to_string(&chi)),
                    homology: Some(h),
                    error: None,
                },
                Err(e) => EulerRow {
                    index: delta.index(),
                    chi: None,
                    homology: Some(h),
                    error: Some(e.to_string()),
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EulerTable { rows })
}

fn cmd_euler(input: &InputArgs, seq: &SeqArgs, format: Format) -> Result<Outcome> {
    let f = load_resolution(input)?;
    let seq = load_sequence(seq, f.rank())?;
    let table = euler_table(&f, &seq)?;
    let code = if table.rows.iter().all(|r| r.chi.is_none()) {
        EXIT_INFINITE_HOMOLOGY
    } else {
        EXIT_OK
    };
    let orders = |r: &EulerRow| -> String {
        r.homology
            .as_ref()
            .map(|h| {
                h.degrees
                    .iter()
                    .map(|d| {
                        if d.free_rank > 0 {
                            format!("Z^{}x{}", d.free_rank, d.order)
                        } else {
                            d.order.to_string()
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .unwrap_or_default()
    };
    let out = match format {
        Format::Json => json(&table)?,
        Format::Csv => csv_table(
            &["index", "chi", "homology_orders", "error"],
            table
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.index.to_string(),
                        r.chi.clone().unwrap_or_default(),
                        orders(r),
                        r.error.clone().unwrap_or_default(),
                    ]
                })
                .collect(),
        )?,
        Format::Text => table
            .rows
            .iter()
            .map(|r| match &r.chi {
                Some(c) => format!("index {:>6}  chi = {c}  |H_i| = {}\n", r.index, orders(r)),
                None => format!("index {:>6}  infinite homology ({})\n", r.index, orders(r)),
            })
            .collect(),
    };
    Ok(Outcome::ok(out, code))
}

fn convergence_rows(c: &ConvergenceReport, counts: Option<&[num_rational::BigRational]>) -> Vec<Vec<String>> {
    c.levels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let mut row = vec![l.index.to_string()];
            if let Some(cs) = counts {
                row.push(crate::serde_big::rational::to_string(&cs[i]));
            }
            row.push(l.value.to_string());
            row.push(l.value.valuation().to_string());
            row.push(
                i.checked_sub(1)
                    .map(|j| c.difference_valuations[j].to_string())
                    .unwrap_or_default(),
            );
            row
        })
        .collect()
}

fn entropy_text(r: &EntropyReport) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "p = {}, K = {}, count = {:?}, verdict = {}\n",
        r.p,
        r.precision,
        r.count,
        r.verdict.kind()
    ));
    for (i, l) in r.convergence.levels.iter().enumerate() {
        let d = i
            .checked_sub(1)
            .map(|j| r.convergence.difference_valuations[j].to_string())
            .unwrap_or_else(|| "-".into());
        s.push_str(&format!(
            "index {:>6}  count = {}  value = {}  diff_val = {d}\n",
            l.index,
            crate::serde_big::rational::to_string(&r.counts[i]),
            l.value
        ));
    }
    s.push_str(&format!(
        "cauchy = {}, agreement depth = {}\n",
        r.convergence.cauchy, r.convergence.agreement_depth
    ));
    match &r.entropy {
        Some(h) => s.push_str(&format!("h_p = tau_p = {h}\n")),
        None => s.push_str("h_p: no estimate (sequence not Cauchy)\n"),
    }
    if let Some(sr) = &r.series_route {
        s.push_str(&format!("series route = {sr}\n"));
    }
    s
}

fn cmd_padic_entropy(
    input: &InputArgs,
    seq: &SeqArgs,
    p: u64,
    precision: u32,
    count: CountMode,
    format: Format,
) -> Result<Outcome> {
    let f = load_resolution(input)?;
    let seq = load_sequence(seq, f.rank())?;
    let r = padic_entropy(&f, p, &seq, precision, count)?;
    let code = if r.convergence.cauchy { EXIT_OK } else { EXIT_NON_CAUCHY };
    let out = match format {
        Format::Json => json(&r)?,
        Format::Csv => csv_table(
            &["index", "count", "value", "valuation", "difference_valuation"],
            convergence_rows(&r.convergence, Some(&r.counts)),
        )?,
        Format::Text => entropy_text(&r),
    };
    Ok(Outcome::ok(out, code))
}

fn cmd_compare(input: &InputArgs, seq: &SeqArgs, p: u64, precision: u32, format: Format) -> Result<Outcome> {
    let f = load_poly(input)?;
    let seq = load_sequence(seq, f.rank())?;
    let r = entropy_compare(&f, p, &seq, precision)?;
    let code = if r.padic.convergence.cauchy { EXIT_OK } else { EXIT_NON_CAUCHY };
    let out = match format {
        Format::Json => json(&r)?,
        Format::Csv => csv_table(
            &["index", "chi", "classical", "padic"],
            r.classical
                .rows
                .iter()
                .zip(&r.padic.convergence.levels)
                .map(|(c, l)| {
                    vec![
                        c.index.to_string(),
                        crate::serde_big::rational::to_string(&c.chi),
                        format!("{:.15}", c.value),
                        l.value.to_string(),
                    ]
                })
                .collect(),
        )?,
        Format::Text => {
            let hp = r
                .h_p
                .as_ref()
                .map(|x| x.to_string())
                .unwrap_or_else(|| "no estimate".into());
            format!(
                "f = {}\nh = m(f) = {:.15}\nclassical periodic estimate = {:.15}\nh_{} = {hp}\nlogdet series = {}\n",
                r.poly, r.h, r.classical.estimate, r.p, r.logdet.determinant_route
            )
        }
    };
    Ok(Outcome::ok(out, code))
}

fn cmd_mahler(input: &InputArgs, format: Format) -> Result<Outcome> {
    let f = load_poly(input)?;
    let r = mahler_measure(&f)?;
    let out = match format {
        Format::Json => json(&r)?,
        Format::Text => format!(
            "m({f}) = {:.15} (grid {}, error estimate {:e}, converged {})\n",
            r.value, r.grid, r.error_estimate, r.converged
        ),
        Format::Csv => csv_table(
            &["value", "grid", "error_estimate", "converged"],
            vec![vec![
                format!("{:.15}", r.value),
                r.grid.to_string(),
                format!("{:e}", r.error_estimate),
                r.converged.to_string(),
            ]],
        )?,
    };
    Ok(Outcome::ok(out, EXIT_OK))
}

fn cmd_torsion(inline: Option<&str>, file: Option<&PathBuf>, format: Format) -> Result<Outcome> {
    let src = match (inline, file) {
        (Some(s), None) => s.to_string(),
        (None, Some(f)) => read_file(f)?,
        _ => return Err(parse_err("give the complex inline or with --matrix")),
    };
    let mats: Vec<Vec<Vec<i64>>> = serde_json::from_str(&src)?;
    let boundaries = mats
        .iter()
        .map(|m| IntMatrix::from_rows(m))
        .collect::<Result<Vec<_>>>()?;
    let c = BasedComplex::new(boundaries)?;
    let r: TorsionReport = torsion_rational(&c)?;
    let rat = crate::serde_big::rational::to_string;
    let out = match format {
        Format::Json => json(&r)?,
        Format::Text => format!(
            "torsion = {} (alternative contraction: {})\n|H_i| = {:?}\nprod |H_i|^(-1)^i = {}\nmatch = {}\n",
            rat(&r.torsion_abs),
            rat(&r.torsion_alt),
            r.homology_orders.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            rat(&r.homology_product),
            r.matches
        ),
        Format::Csv => csv_table(
            &["torsion_abs", "torsion_alt", "homology_product", "match"],
            vec![vec![
                rat(&r.torsion_abs),
                rat(&r.torsion_alt),
                rat(&r.homology_product),
                r.matches.to_string(),
            ]],
        )?,
    };
    Ok(Outcome::ok(out, EXIT_OK))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogdetDocument {
    pub route: Route,
    pub series: Option<LogdetRoutes>,
    pub limit: Option<ConvergenceReport>,
    /// Whether the two routes agree to the limit's agreement depth.
    pub routes_agree: Option<bool>,
}

fn cmd_logdet(
    input: &InputArgs,
    seq: &SeqArgs,
    p: u64,
    precision: u32,
    route: Route,
    format: Format,
) -> Result<Outcome> {
    let f = load_resolution(input)?;
    if !f.is_principal() {
        return Err(parse_err("logdet needs a polynomial or a square matrix"));
    }
    let m = &f.boundaries()[0];
    let series = match route {
        Route::Series | Route::Both => Some(logdet_matrix(m, p, precision)?),
        Route::Limit => None,
    };
    let limit = match route {
        Route::Limit | Route::Both => Some(logdet_limit_estimate(m, p, &load_sequence(seq, f.rank())?, precision)?),
        Route::Series => None,
    };
    let routes_agree = match (&series, &limit) {
        (Some(s), Some(l)) => l.extrapolated.as_ref().map(|x| {
            let depth = l.agreement_depth.finite().unwrap_or(precision as i64).min(precision as i64);
            x.agrees_to(&s.determinant_route, depth)
        }),
        _ => None,
    };
    let code = match &limit {
        Some(l) if !l.cauchy => EXIT_NON_CAUCHY,
        _ if routes_agree == Some(false) => EXIT_FAILURE,
        _ => EXIT_OK,
    };
    let doc = LogdetDocument {
        route,
        series,
        limit,
        routes_agree,
    };
    let out = match format {
        Format::Json => json(&doc)?,
        Format::Csv => match &doc.limit {
            Some(l) => csv_table(
                &["index", "value", "valuation", "difference_valuation"],
                convergence_rows(l, None),
            )?,
            None => csv_table(
                &["determinant_route", "matrix_route"],
                vec![vec![
                    doc.series.as_ref().map(|s| s.determinant_route.to_string()).unwrap_or_default(),
                    doc.series
                        .as_ref()
                        .and_then(|s| s.matrix_route.as_ref())
                        .map(|x| x.to_string())
                        .unwrap_or_default(),
                ]],
            )?,
        },
        Format::Text => {
            let mut s = String::new();
            if let Some(sr) = &doc.series {
                s.push_str(&format!("series: {}\n", sr.determinant_route));
                if let Some(mr) = &sr.matrix_route {
                    s.push_str(&format!("matrix series: {mr}\n"));
                }
            }
            if let Some(l) = &doc.limit {
                match &l.extrapolated {
                    Some(x) => s.push_str(&format!("limit: {x} (agreement depth {})\n", l.agreement_depth)),
                    None => s.push_str("limit: not Cauchy\n"),
                }
            }
            if let Some(a) = doc.routes_agree {
                s.push_str(&format!("routes agree: {a}\n"));
            }
            s
        }
    };
    Ok(Outcome::ok(out, code))
}
