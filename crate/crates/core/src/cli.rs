//! Command-line front end: single-variety reports and batch sweeps.
//!
//! Exit codes are shared by every subcommand: 0 when every applicable
//! hypothesis is verified, 1 when one is violated, 2 on input errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hilbert::{HilbertData, HilbertError};
use crate::ratpoly::{fmt_rational, Rational};
use crate::root_system::{MarkedSystem, RootSystemError, Series, SimpleType};
use crate::varieties::{self, AbelianSpec, StepKind, VarietyError};
use crate::verify::{self, ApproxRoot, Hypothesis, Status, StripReport, Verdict, VerifyError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Hard upper bound on `--max-rank`.
pub const RANK_HARD_CAP: usize = 10;
pub const OUT_DIR_ENV: &str = "CANONSTRIP_OUT_DIR";

const DIAGRAMS: &str = "\
Node numbering (Bourbaki):
  A_n  1 - 2 - ... - n
  B_n  1 - 2 - ... - (n-1) => n          (n short)
  C_n  1 - 2 - ... - (n-1) <= n          (n long)
  D_n  1 - 2 - ... - (n-2) < (n-1), n
  E_n  1 - 3 - 4 - 5 - ... - n, with 2 attached to 4
  F_4  1 - 2 => 3 - 4                    (3, 4 short)
  G_2  1 <= 2                            (1 short)
Aliases: C2 is read as B2 and D3 as A3, with node numbers translated.";

#[derive(Debug, Parser)]
#[command(name = "canonstrip", version)]
#[command(
    about = "Hilbert polynomials of G/P and descendants, with certified canonical-strip verdicts"
)]
#[command(after_help = DIAGRAMS)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report on a rational homogeneous space G/P.
    Gp(GpArgs),
    /// Complete intersection of hypersurfaces in G/P.
    Ci(CiArgs),
    /// Double cover of G/P branched along a member of |2dL|.
    Cover(CoverArgs),
    /// Complete intersection in an abelian variety, from a JSON spec file.
    Abelian(AbelianArgs),
    /// Batch sweep over G/P and their complete intersections.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Output file; relative paths resolve against $CANONSTRIP_OUT_DIR when set.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include advisory floating-point roots with this many digits.
    #[arg(long)]
    pub digits: Option<u32>,
}

#[derive(Debug, Args, Clone)]
pub struct SpaceArgs {
    /// Series letter, optionally with rank (e.g. A, E6).
    #[arg(long = "type")]
    pub ty: String,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Bourbaki node number of the marked simple root.
    #[arg(long)]
    pub node: usize,
}

#[derive(Debug, Args)]
pub struct GpArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CiArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Comma-separated hypersurface degrees.
    #[arg(long, value_delimiter = ',', required = true)]
    pub degrees: Vec<i64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CoverArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Branch locus is a member of |2dL|.
    #[arg(long)]
    pub degree: i64,
    /// Accept d > index (general type; no structure theorem applies).
    #[arg(long)]
    pub allow_general_type: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AbelianArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Clone)]
pub struct SweepArgs {
    /// Restrict to these series (comma list of letters).
    #[arg(long, value_delimiter = ',')]
    pub series: Vec<String>,
    #[arg(long, default_value_t = 8)]
    pub max_rank: usize,
    /// Restrict to these node numbers.
    #[arg(long, value_delimiter = ',')]
    pub nodes: Vec<usize>,
    /// Cap on the sum of hypersurface degrees.
    #[arg(long, default_value_t = 3)]
    pub max_total_degree: i64,
    /// Additionally cap the degree sum at index + this slack.
    #[arg(long)]
    pub index_slack: Option<i64>,
    #[arg(long, default_value_t = 2)]
    pub max_codim: usize,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => EXIT_INPUT,
            CliError::RootSystem(e) => match e {
                RootSystemError::InvalidType { .. }
                | RootSystemError::UnknownSeries(_)
                | RootSystemError::NodeOutOfRange { .. } => EXIT_INPUT,
                _ => EXIT_VIOLATION,
            },
            CliError::Variety(e) => match e {
                VarietyError::InvalidDegree(_)
                | VarietyError::TooManyDegrees { .. }
                | VarietyError::CoverDegreeOutOfRange { .. }
                | VarietyError::Abelian(_) => EXIT_INPUT,
                VarietyError::Hilbert(HilbertError::RootSystem(
                    RootSystemError::InvalidType { .. } | RootSystemError::NodeOutOfRange { .. },
                )) => EXIT_INPUT,
                _ => EXIT_VIOLATION,
            },
            _ => EXIT_VIOLATION,
        }
    }
}

/// Parses `--type` / `--rank` / `--node` into a marked system.
pub fn resolve_space(args: &SpaceArgs) -> Result<MarkedSystem, CliError> {
    let s = args.ty.trim();
    let split = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
    let (letters, digits) = s.split_at(split);
    let series: Series = letters.parse()?;
    let embedded = if digits.is_empty() {
        None
    } else {
        Some(
            digits
                .parse::<usize>()
                .map_err(|_| CliError::Input(format!("bad type {s:?}")))?,
        )
    };
    let rank = match (embedded, args.rank, series.fixed_rank()) {
        (Some(a), Some(b), _) if a != b => {
            return Err(CliError::Input(format!(
                "--type {s} conflicts with --rank {b}"
            )))
        }
        (Some(a), _, _) | (None, Some(a), _) | (None, None, Some(a)) => a,
        (None, None, None) => {
            return Err(CliError::Input(format!(
                "--rank is required for series {series}"
            )))
        }
    };
    if rank > RANK_HARD_CAP {
        return Err(CliError::Input(format!(
            "rank {rank} exceeds the hard cap {RANK_HARD_CAP}"
        )));
    }
    let (t, node) = SimpleType::canonicalize(series, rank, args.node)?;
    Ok(MarkedSystem::build(t, node)?)
}

// ---------------------------------------------------------------------------
// JSON report

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub description: String,
    pub class: String,
    pub dim: usize,
    pub index: i64,
    #[serde(rename = "degree_L")]
    pub degree_l: Option<String>,
    pub euler_characteristic: Option<String>,
    pub factored: Vec<FactoredLevel>,
    /// Residual factor in the L-variable, lowest degree first.
    pub residual: Vec<String>,
    pub variable: String,
    pub rational_roots: Vec<RootEntry>,
    pub residual_line: Option<String>,
    pub residual_on_line: String,
    pub verdicts: BTreeMap<String, Verdict>,
    pub boundary_contact: bool,
    pub expected: Option<String>,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coxeter: Option<CoxeterNote>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub approx_roots: Option<ApproxBlock>,
}

/// Coxeter number next to the index, for `G/P` reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxeterNote {
    pub h: i64,
    pub cominuscule: bool,
    /// `index - h`.
    pub offset: i64,
}

impl CoxeterNote {
    pub fn of(ms: &MarkedSystem) -> Self {
        let h = ms.rs.coxeter_number();
        CoxeterNote {
            h,
            cominuscule: ms.is_cominuscule(),
            offset: ms.index - h,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactoredLevel {
    pub level: u32,
    pub b: String,
    pub exponents: Vec<Exponent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exponent {
    pub k: String,
    pub h: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootEntry {
    pub root: String,
    pub mult: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxBlock {
    pub advisory: bool,
    pub digits: u32,
    pub roots: Vec<ApproxRoot>,
}

fn enum_name<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

impl Report {
    pub fn build(
        hd: Option<&HilbertData>,
        sr: &StripReport,
        residual_l: &[Rational],
        digits: Option<u32>,
    ) -> Result<Self, CliError> {
        let factored = hd
            .map(|hd| {
                hd.levels
                    .iter()
                    .map(|t| FactoredLevel {
                        level: t.level,
                        b: fmt_rational(&t.b),
                        exponents: t
                            .exponents
                            .iter()
                            .map(|(k, &h)| Exponent {
                                k: fmt_rational(k),
                                h,
                            })
                            .collect(),
                    })
                    .collect()
            })
            .unwrap_or_default();
        let degree_l = match hd {
            Some(hd) => Some(hd.degree()?.to_string()),
            None => None,
        };
        let approx_roots = match digits {
            Some(d) => {
                let p = match hd {
                    Some(hd) => hd.expand(sr.variable)?,
                    None => sr.residual.clone(),
                };
                Some(ApproxBlock {
                    advisory: true,
                    digits: d,
                    roots: if p.deg() >= 1 {
                        verify::approx_roots(&p, d)?
                    } else {
                        Vec::new()
                    },
                })
            }
            None => None,
        };
        Ok(Report {
            description: sr.description.clone(),
            class: sr.class.to_string(),
            dim: sr.dim,
            index: sr.index,
            degree_l,
            euler_characteristic: hd.map(|h| fmt_rational(&h.euler_characteristic())),
            factored,
            residual: residual_l.iter().map(fmt_rational).collect(),
            variable: enum_name(&sr.variable),
            rational_roots: sr
                .rational_roots
                .iter()
                .map(|(r, m)| RootEntry {
                    root: fmt_rational(r),
                    mult: *m,
                })
                .collect(),
            residual_line: sr.residual_line.as_ref().map(fmt_rational),
            residual_on_line: enum_name(&sr.residual_on_line),
            verdicts: sr
                .verdicts
                .iter()
                .map(|(h, v)| (h.to_string(), v.clone()))
                .collect(),
            boundary_contact: sr.boundary_contact,
            expected: sr.expected.map(|h| h.to_string()),
            verified: sr.expected_holds(),
            coxeter: None,
            approx_roots,
        })
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_text(&self, factored_form: Option<&str>) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.description);
        let _ = writeln!(
            s,
            "  dim {}  index {}  class {}  degree_L {}",
            self.dim,
            self.index,
            self.class,
            self.degree_l.as_deref().unwrap_or("-")
        );
        if let Some(f) = factored_form {
            let _ = writeln!(s, "  H_L(z) = {f}");
        }
        for lvl in &self.factored {
            let ex: Vec<String> = lvl
                .exponents
                .iter()
                .map(|e| format!("{}:{}", e.k, e.h))
                .collect();
            let _ = writeln!(s, "  level {} (b = {}): {}", lvl.level, lvl.b, ex.join(" "));
        }
        let _ = writeln!(
            s,
            "  residual (L-variable, low to high): [{}]",
            self.residual.join(", ")
        );
        if !self.rational_roots.is_empty() {
            let rr: Vec<String> = self
                .rational_roots
                .iter()
                .map(|r| {
                    if r.mult == 1 {
                        r.root.clone()
                    } else {
                        format!("{}^{}", r.root, r.mult)
                    }
                })
                .collect();
            let _ = writeln!(s, "  rational roots ({}): {}", self.variable, rr.join(" "));
        }
        let _ = writeln!(
            s,
            "  residual on line Re = {}: {}",
            self.residual_line.as_deref().unwrap_or("-"),
            self.residual_on_line
        );
        for (h, v) in &self.verdicts {
            let status = enum_name(&v.status);
            let extra = match (&v.strict, &v.witness) {
                (Some(false), _) => " (boundary contact)".to_string(),
                (_, Some(w)) => format!(" [witness: {w}]"),
                _ => String::new(),
            };
            let _ = writeln!(s, "  {h:<3} {status}{extra}");
        }
        if let Some(c) = &self.coxeter {
            let _ = writeln!(
                s,
                "  coxeter number {}{}, index - h = {}",
                c.h,
                if c.cominuscule { " (cominuscule)" } else { "" },
                c.offset
            );
        }
        if let Some(block) = &self.approx_roots {
            let _ = writeln!(
                s,
                "  approximate roots (advisory, {} digits):",
                block.digits
            );
            for r in &block.roots {
                let _ = writeln!(
                    s,
                    "    {:+.*} {:+.*}i  x{}",
                    block.digits as usize, r.re, block.digits as usize, r.im, r.mult
                );
            }
        }
        let _ = writeln!(
            s,
            "  expected {}: {}",
            self.expected.as_deref().unwrap_or("-"),
            if self.verified {
                "verified"
            } else {
                "VIOLATED"
            }
        );
        s
    }
}

fn resolve_out(out: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if out.is_relative() => Path::new(&dir).join(out),
        _ => out.to_path_buf(),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => {
            let p = resolve_out(p);
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(p, text)?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn render_single(
    hd: Option<&HilbertData>,
    sr: &StripReport,
    residual_l: &[Rational],
    output: &OutputArgs,
    coxeter: Option<CoxeterNote>,
) -> Result<i32, CliError> {
    let mut report = Report::build(hd, sr, residual_l, output.digits)?;
    report.coxeter = coxeter;
    let text = match output.format {
        Format::Json => report.to_json()?,
        Format::Text => report.to_text(hd.map(HilbertData::factored_string).as_deref()),
        Format::Csv => {
            let rec = SweepRecord::from_report(&report, "", 0, 0, "");
            records_to_csv(&[rec])?
        }
    };
    emit(&text, output.out.as_deref())?;
    Ok(if report.verified {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

fn report_hilbert(
    hd: &HilbertData,
    output: &OutputArgs,
    expected: bool,
    coxeter: Option<CoxeterNote>,
) -> Result<i32, CliError> {
    let mut sr = verify::strip_report(hd)?;
    if !expected {
        sr.expected = None;
    }
    render_single(Some(hd), &sr, hd.residual.coeffs(), output, coxeter)
}

pub fn cmd_gp(args: &GpArgs) -> Result<i32, CliError> {
    let ms = resolve_space(&args.space)?;
    let hd = HilbertData::for_gp(&ms)?;
    report_hilbert(&hd, &args.output, true, Some(CoxeterNote::of(&ms)))
}

pub fn cmd_ci(args: &CiArgs) -> Result<i32, CliError> {
    let ms = resolve_space(&args.space)?;
    let hd = varieties::complete_intersection(&ms, &args.degrees)?;
    report_hilbert(&hd, &args.output, true, None)
}

pub fn cmd_cover(args: &CoverArgs) -> Result<i32, CliError> {
    let ms = resolve_space(&args.space)?;
    if args.allow_general_type && args.degree > ms.index {
        let base = HilbertData::for_gp(&ms)?;
        let hd = varieties::section_step(&base, args.degree, StepKind::Cover)?;
        return report_hilbert(&hd, &args.output, false, None);
    }
    let hd = varieties::double_cover(&ms, args.degree)?;
    report_hilbert(&hd, &args.output, true, None)
}

pub fn cmd_abelian(args: &AbelianArgs) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(&args.spec)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.spec.display())))?;
    let spec = AbelianSpec::from_json(&text)?;
    let p = varieties::abelian_ci(&spec)?;
    let desc = format!("abelian complete intersection n={} c={}", spec.n, spec.c);
    let sr = verify::polynomial_line_report(&desc, spec.n, &p)?;
    render_single(None, &sr, p.coeffs(), &args.output, None)
}

// ---------------------------------------------------------------------------
// Sweeps

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub series: String,
    pub rank: usize,
    pub node: usize,
    pub degrees: String,
    pub dim: usize,
    pub index: i64,
    pub class: String,
    pub tcs: String,
    pub cl: String,
    pub boundary_contact: bool,
    #[serde(rename = "degree_L")]
    pub degree_l: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    #[serde(skip)]
    pub ok: bool,
}

impl SweepRecord {
    fn from_report(r: &Report, series: &str, rank: usize, node: usize, degrees: &str) -> Self {
        let status = |h: &str| {
            r.verdicts
                .get(h)
                .map(|v| enum_name(&v.status))
                .unwrap_or_default()
        };
        SweepRecord {
            series: series.to_string(),
            rank,
            node,
            degrees: degrees.to_string(),
            dim: r.dim,
            index: r.index,
            class: r.class.clone(),
            tcs: status("TCS"),
            cl: status("CL"),
            boundary_contact: r.boundary_contact,
            degree_l: r.degree_l.clone().unwrap_or_default(),
            error: None,
            ok: r.verified,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub cases: usize,
    pub holds: usize,
    pub fails: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub summary: SweepSummary,
    pub records: Vec<SweepRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepCase {
    pub simple_type: SimpleType,
    pub node: usize,
    pub degrees: Vec<i64>,
}

/// Non-decreasing degree tuples of length `1..=max_len` with sum at most `cap`.
pub fn multidegrees(cap: i64, max_len: usize) -> Vec<Vec<i64>> {
    fn rec(prefix: &mut Vec<i64>, min: i64, left: i64, max_len: usize, out: &mut Vec<Vec<i64>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        if prefix.len() == max_len {
            return;
        }
        for d in min..=left {
            prefix.push(d);
            rec(prefix, d, left - d, max_len, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), 1, cap, max_len, &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Enumerates the sweep cases in canonical order.
pub fn sweep_cases(cfg: &SweepArgs) -> Result<Vec<SweepCase>, CliError> {
    if cfg.max_rank > RANK_HARD_CAP {
        return Err(CliError::Input(format!(
            "--max-rank {} exceeds the hard cap {RANK_HARD_CAP}",
            cfg.max_rank
        )));
    }
    if cfg.jobs == 0 {
        return Err(CliError::Input("--jobs must be at least 1".into()));
    }
    let series: Vec<Series> = cfg
        .series
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_, _>>()?;
    let mut cases = Vec::new();
    for t in SimpleType::enumerate(cfg.max_rank) {
        if !series.is_empty() && !series.contains(&t.series) {
            continue;
        }
        for node in 1..=t.rank {
            if !cfg.nodes.is_empty() && !cfg.nodes.contains(&node) {
                continue;
            }
            let ms = MarkedSystem::build(t, node)?;
            let mut cap = cfg.max_total_degree;
            if let Some(slack) = cfg.index_slack {
                cap = cap.min(ms.index + slack);
            }
            cases.push(SweepCase {
                simple_type: t,
                node,
                degrees: Vec::new(),
            });
            for degrees in multidegrees(cap, cfg.max_codim.min(ms.dim())) {
                cases.push(SweepCase {
                    simple_type: t,
                    node,
                    degrees,
                });
            }
        }
    }
    Ok(cases)
}

pub fn run_case(case: &SweepCase) -> SweepRecord {
    let degrees = case
        .degrees
        .iter()
        .map(i64::to_string)
        .collect::<Vec<_>>()
        .join(",");
    let series = case.simple_type.series.to_string();
    let compute = || -> Result<Report, CliError> {
        let ms = MarkedSystem::build(case.simple_type, case.node)?;
        let hd = varieties::complete_intersection(&ms, &case.degrees)?;
        let sr = verify::strip_report(&hd)?;
        Report::build(Some(&hd), &sr, hd.residual.coeffs(), None)
    };
    match compute() {
        Ok(r) => SweepRecord::from_report(&r, &series, case.simple_type.rank, case.node, &degrees),
        Err(e) => SweepRecord {
            series,
            rank: case.simple_type.rank,
            node: case.node,
            degrees,
            dim: 0,
            index: 0,
            class: String::new(),
            tcs: String::new(),
            cl: String::new(),
            boundary_contact: false,
            degree_l: String::new(),
            error: Some(e.to_string()),
            ok: false,
        },
    }
}

/// Runs a sweep on a bounded worker pool; record order is independent of `jobs`.
pub fn run_sweep(cfg: &SweepArgs) -> Result<SweepOutput, CliError> {
    let cases = sweep_cases(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::Input(e.to_string()))?;
    let records: Vec<SweepRecord> = pool.install(|| cases.par_iter().map(run_case).collect());
    let holds = records.iter().filter(|r| r.ok).count();
    Ok(SweepOutput {
        summary: SweepSummary {
            cases: records.len(),
            holds,
            fails: records.len() - holds,
        },
        records,
    })
}

const CSV_COLUMNS: [&str; 11] = [
    "series",
    "rank",
    "node",
    "degrees",
    "dim",
    "index",
    "class",
    "tcs",
    "cl",
    "boundary_contact",
    "degree_L",
];

pub fn records_to_csv(records: &[SweepRecord]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS)?;
    for r in records {
        w.write_record([
            r.series.clone(),
            r.rank.to_string(),
            r.node.to_string(),
            r.degrees.clone(),
            r.dim.to_string(),
            r.index.to_string(),
            r.class.clone(),
            r.tcs.clone(),
            r.cl.clone(),
            r.boundary_contact.to_string(),
            r.degree_l.clone(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn render_sweep(out: &SweepOutput, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(out)?;
            s.push('\n');
            s
        }
        Format::Csv => records_to_csv(&out.records)?,
        Format::Text => {
            let mut s = String::new();
            for r in &out.records {
                let name = format!("{}{}/P{}", r.series, r.rank, r.node);
                let deg = if r.degrees.is_empty() {
                    "-".to_string()
                } else {
                    r.degrees.clone()
                };
                match &r.error {
                    Some(e) => {
                        let _ = writeln!(s, "{name:<10} {deg:<10} ERROR {e}");
                    }
                    None => {
                        let _ = writeln!(
                            s,
                            "{name:<10} {deg:<10} dim {:<4} index {:<4} {:<13} tcs {:<15} cl {:<15} {}",
                            r.dim,
                            r.index,
                            r.class,
                            r.tcs,
                            r.cl,
                            if r.ok { "ok" } else { "FAIL" }
                        );
                    }
                }
            }
            let _ = writeln!(
                s,
                "{} cases, {} verified, {} failed",
                out.summary.cases, out.summary.holds, out.summary.fails
            );
            s
        }
    })
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<i32, CliError> {
    let out = run_sweep(args)?;
    let text = render_sweep(&out, args.format)?;
    emit(&text, args.out.as_deref())?;
    Ok(if out.summary.fails == 0 {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

/// Dispatches a parsed command line and maps errors to exit codes.
pub fn run(cli: &Cli) -> i32 {
    let result = match &cli.command {
        Command::Gp(a) => cmd_gp(a),
        Command::Ci(a) => cmd_ci(a),
        Command::Cover(a) => cmd_cover(a),
        Command::Abelian(a) => cmd_abelian(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Verdict status of a hypothesis in a strip report, for callers that only
/// need the headline.
pub fn status_of(sr: &StripReport, h: Hypothesis) -> Status {
    sr.verdicts
        .get(&h)
        .map(|v| v.status)
        .unwrap_or(Status::NotApplicable)
}
