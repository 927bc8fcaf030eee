//! Command-line front end for `refined-floors`.
//!
//! [`run`] parses arguments, executes one command and returns the exit code
//! together with everything that should go to stdout and stderr, so the
//! binary and the integration tests share one code path.

use std::ffi::OsString;
use std::fmt::{Display, Write as _};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use thiserror::Error;

use refined_floors::checks::{self, Report};
use refined_floors::marking::nu;
use refined_floors::polygon::{parse_polygon_literal, PolygonError};
use refined_floors::{Coefficient, GenusComputation, LatticePolygon, LatticeTransform, Pairing};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_OVERFLOW: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "rfloors", version, about = "Refined invariants of h-transverse lattice polygons via floor diagrams")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Worker threads for the per-diagram summation (results do not depend on it).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: Option<u16>,

    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    /// Use unbounded integer coefficients instead of checked 64-bit ones.
    #[arg(long, global = true)]
    pub bigint: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Records,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a, e_top, e_bot, y, chi and g_max of a polygon.
    Polydata { polygon: String },
    /// List the floor diagrams of genus g with their degree, codegree and ν.
    Diagrams {
        polygon: String,
        #[arg(short = 'g', long = "genus")]
        genus: i64,
    },
    /// Compute G_g(Δ, s), or G_g(Δ, S) for an explicit pairing.
    Invariant {
        polygon: String,
        #[arg(short = 'g', long = "genus")]
        genus: i64,
        #[arg(short = 's', long = "s", conflicts_with = "pairing")]
        s: Option<usize>,
        /// Explicit pairing `i-j,k-l,...` of consecutive marks.
        #[arg(long)]
        pairing: Option<String>,
    },
    /// Per-diagram contributions for s = 0..=smax.
    Table {
        polygon: String,
        #[arg(short = 'g', long = "genus")]
        genus: i64,
        /// Last value of s (defaults to the largest valid one).
        #[arg(long)]
        smax: Option<usize>,
    },
    /// Run a named checker.
    Check(CheckArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckName {
    PairingIndependence,
    Monotonicity,
    Positivity,
    Polynomiality,
    CornerCut,
    AbFormula,
    LatticeInvariance,
    Lemma32,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    pub name: CheckName,
    /// Polygon(s) the check runs on; lattice-invariance takes two.
    pub polygons: Vec<String>,
    #[arg(short = 'g', long = "genus")]
    pub genus: Option<i64>,
    /// Only this s (all valid s when omitted).
    #[arg(short = 's', long = "s")]
    pub s: Option<usize>,
    /// Codegree index for polynomiality.
    #[arg(short = 'i', long)]
    pub i: Option<usize>,
    #[arg(short = 'a')]
    pub a: Option<i64>,
    #[arg(short = 'b')]
    pub b: Option<i64>,
    /// Random pairings per check.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// Affine map `m11,m12,m21,m22,tx,ty` for lattice-invariance.
    #[arg(long, allow_hyphen_values = true)]
    pub transform: Option<String>,
    /// Polygon with the top corner cut (derived when omitted).
    #[arg(long)]
    pub cut: Option<String>,
    /// Range `[-r, r]` for lemma32.
    #[arg(long, default_value_t = 5)]
    pub range: i64,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid polygon `{literal}`: {source}")]
    Polygon { literal: String, source: PolygonError },
    #[error(transparent)]
    Engine(#[from] refined_floors::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(e) if e.is_overflow() => EXIT_OVERFLOW,
            _ => EXIT_USAGE,
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    let pool = match cli.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n as usize).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => return Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    let mut out = Writer::new(cli.format);
    match pool.install(|| dispatch(cli, &mut out)) {
        Ok(code) => Outcome { code, stdout: out.buf, stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: out.buf, stderr: format!("error: {e}\n") },
    }
}

struct Writer {
    format: Format,
    buf: String,
}

impl Writer {
    fn new(format: Format) -> Self {
        Writer { format, buf: String::new() }
    }

    fn record(&mut self, key: &str, value: impl Display) {
        let _ = writeln!(self.buf, "{key}\t{value}");
    }

    fn line(&mut self, text: impl Display) {
        let _ = writeln!(self.buf, "{text}");
    }

    fn text(&self) -> bool {
        self.format == Format::Text
    }
}

fn polygon(literal: &str) -> Result<LatticePolygon, CliError> {
    parse_polygon_literal(literal).map_err(|source| CliError::Polygon { literal: literal.to_string(), source })
}

fn computation(literal: &str, genus: i64) -> Result<GenusComputation, CliError> {
    let p = polygon(literal)?;
    let h = p.profile().map_err(|source| CliError::Polygon { literal: literal.to_string(), source })?;
    // above g_max there are no diagrams and the invariant is 0
    if genus < 0 {
        return Err(CliError::Usage(format!("genus must be nonnegative, got {genus}")));
    }
    Ok(GenusComputation::new(&h, genus)?)
}

fn dispatch(cli: &Cli, out: &mut Writer) -> Result<i32, CliError> {
    match &cli.command {
        Command::Polydata { polygon: lit } => polydata(lit, out),
        Command::Diagrams { polygon, genus } => diagrams(polygon, *genus, out),
        Command::Invariant { polygon, genus, s, pairing } => {
            if cli.bigint {
                invariant::<BigInt>(polygon, *genus, *s, pairing.as_deref(), out)
            } else {
                invariant::<i64>(polygon, *genus, *s, pairing.as_deref(), out)
            }
        }
        Command::Table { polygon, genus, smax } => {
            if cli.bigint {
                table::<BigInt>(polygon, *genus, *smax, out)
            } else {
                table::<i64>(polygon, *genus, *smax, out)
            }
        }
        Command::Check(args) => check(args, cli.seed, out),
    }
}

fn polydata(literal: &str, out: &mut Writer) -> Result<i32, CliError> {
    let p = polygon(literal)?;
    let d = p.data();
    let profile = p.profile().ok();
    if out.text() {
        out.line("polygon\ta\te_top\te_bot\ty\tchi\tg_max");
        out.line(format_args!("{literal}\t{}\t{}\t{}\t{}\t{}\t{}", d.a, d.e_top, d.e_bot, d.y, d.chi, d.g_max));
        out.line(format_args!("vertices {p}"));
        match &profile {
            Some(h) => out.line(format_args!("profile {h}")),
            None => out.line("profile none (not h-transverse)"),
        }
    } else {
        out.record("polygon", literal);
        out.record("vertices", &p);
        for (k, v) in
            [("a", d.a), ("e_top", d.e_top), ("e_bot", d.e_bot), ("y", d.y), ("chi", d.chi), ("g_max", d.g_max)]
        {
            out.record(k, v);
        }
        out.record("h_transverse", profile.is_some());
        if let Some(h) = &profile {
            out.record("profile", h);
        }
    }
    Ok(EXIT_OK)
}

fn diagrams(literal: &str, genus: i64, out: &mut Writer) -> Result<i32, CliError> {
    let comp = computation(literal, genus)?;
    let data = *comp.data();
    if out.text() {
        out.line(format_args!("# {literal} g={genus}: {} floor diagrams", comp.num_diagrams()));
    } else {
        out.record("polygon", literal);
        out.record("genus", genus);
        out.record("count", comp.num_diagrams());
    }
    for (k, d) in comp.diagrams().enumerate() {
        let stats = d.stats(&data).map_err(refined_floors::Error::from)?;
        let nu = nu(d).map_err(refined_floors::Error::from)?;
        let aut = d.automorphism_count();
        let encoding = d.canonical_form();
        let incomparable = d.has_incomparable_vertices();
        if out.text() {
            let flag = if incomparable { "  incomparable-vertices" } else { "" };
            out.line(format_args!("\nD{}  deg={}  codeg={}  nu={nu}  aut={aut}{flag}", k + 1, stats.deg, stats.codeg));
            out.line(encoding.trim_end());
        } else {
            let tag = format!("D{}", k + 1);
            out.record(&format!("{tag}.deg"), stats.deg);
            out.record(&format!("{tag}.codeg"), stats.codeg);
            out.record(&format!("{tag}.nu"), nu);
            out.record(&format!("{tag}.aut"), aut);
            out.record(&format!("{tag}.incomparable"), incomparable);
            out.record(&format!("{tag}.encoding"), encoding.trim_end().replace('\n', " "));
        }
    }
    Ok(EXIT_OK)
}

fn invariant<C: Coefficient>(
    literal: &str,
    genus: i64,
    s: Option<usize>,
    pairing: Option<&str>,
    out: &mut Writer,
) -> Result<i32, CliError> {
    let comp = computation(literal, genus)?;
    let pairing = match (s, pairing) {
        (_, Some(text)) => {
            let p: Pairing = text.parse().map_err(|e| CliError::Usage(format!("invalid pairing `{text}`: {e}")))?;
            if p.order() > comp.s_max() {
                return Err(refined_floors::Error::SOutOfRange { s: p.order(), s_max: comp.s_max() }.into());
            }
            p
        }
        (s, None) => comp.standard_pairing(s.unwrap_or(0))?,
    };
    let value = comp.invariant_for::<C>(&pairing)?;
    if out.text() {
        out.line(&value);
    } else {
        out.record("polygon", literal);
        out.record("genus", genus);
        out.record("s", pairing.order());
        out.record("pairing", if pairing.order() == 0 { "-".to_string() } else { pairing.to_string() });
        out.record("invariant", &value);
    }
    Ok(EXIT_OK)
}

fn table<C: Coefficient>(literal: &str, genus: i64, smax: Option<usize>, out: &mut Writer) -> Result<i32, CliError> {
    let comp = computation(literal, genus)?;
    let s_hi = smax.unwrap_or(comp.s_max());
    if s_hi > comp.s_max() {
        return Err(refined_floors::Error::SOutOfRange { s: s_hi, s_max: comp.s_max() }.into());
    }
    let t = comp.table::<C>(s_hi)?;
    let names: Vec<String> = (1..=t.diagrams.len()).map(|k| format!("D{k}")).collect();

    if !out.text() {
        out.record("polygon", literal);
        out.record("genus", genus);
        for (k, d) in t.diagrams.iter().enumerate() {
            out.record(&format!("{}.encoding", names[k]), d.canonical_form().trim_end().replace('\n', " "));
        }
        for s in 0..=s_hi {
            for (k, name) in names.iter().enumerate() {
                out.record(&format!("{name}[s={s}]"), &t.rows[k][s]);
            }
            out.record(&format!("total[s={s}]"), &t.totals[s]);
        }
        return Ok(EXIT_OK);
    }

    let mut grid: Vec<Vec<String>> = Vec::new();
    let mut header = vec!["s".to_string()];
    header.extend(names.iter().cloned());
    header.push("total".to_string());
    grid.push(header);
    for s in 0..=s_hi {
        let mut row = vec![s.to_string()];
        for k in 0..t.diagrams.len() {
            row.push(if t.unchanged(k, s) { "*".to_string() } else { t.rows[k][s].to_string() });
        }
        row.push(t.totals[s].to_string());
        grid.push(row);
    }
    let widths: Vec<usize> =
        (0..grid[0].len()).map(|c| grid.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    for row in &grid {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.line(cells.join("  ").trim_end());
    }
    for (k, d) in t.diagrams.iter().enumerate() {
        out.line(format_args!("\n{}", names[k]));
        out.line(d.canonical_form().trim_end());
    }
    Ok(EXIT_OK)
}

fn s_values(requested: Option<usize>, upto: usize) -> Vec<usize> {
    match requested {
        Some(s) => vec![s],
        None => (0..=upto).collect(),
    }
}

fn need<T: Copy>(v: Option<T>, what: &str, name: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("check {name} requires {what}")))
}

fn one_polygon<'a>(args: &'a CheckArgs, name: &str) -> Result<&'a str, CliError> {
    match args.polygons.as_slice() {
        [p] => Ok(p),
        _ => Err(CliError::Usage(format!("check {name} takes exactly one polygon"))),
    }
}

fn profile_of(literal: &str) -> Result<refined_floors::HProfile, CliError> {
    polygon(literal)?.profile().map_err(|source| CliError::Polygon { literal: literal.to_string(), source })
}

fn check(args: &CheckArgs, seed: u64, out: &mut Writer) -> Result<i32, CliError> {
    let label = args.name.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let name = label.as_str();
    let reports: Vec<Report> = match args.name {
        CheckName::Lemma32 => checks::lemma32(args.range)?,
        CheckName::AbFormula => {
            let a = need(args.a, "-a", name)?;
            let b = need(args.b, "-b", name)?;
            let g = need(args.genus, "-g", name)?;
            if a < 1 || b < 0 {
                return Err(CliError::Usage("ab-formula needs a >= 1 and b >= 0".into()));
            }
            let lhs = computation(&format!("rect:{a},{}", a + b), g)?;
            s_values(args.s, lhs.s_max())
                .into_iter()
                .map(|s| checks::ab_formula(a, b, g, s))
                .collect::<Result<_, _>>()?
        }
        CheckName::PairingIndependence => {
            let lit = one_polygon(args, name)?;
            let g = need(args.genus, "-g", name)?;
            let comp = computation(lit, g)?;
            s_values(args.s, comp.s_max())
                .into_iter()
                .map(|s| checks::pairing_independence(comp.profile(), g, s, args.trials, seed))
                .collect::<Result<_, _>>()?
        }
        CheckName::Monotonicity => {
            let lit = one_polygon(args, name)?;
            let g = need(args.genus, "-g", name)?;
            computation(lit, g)?;
            vec![checks::monotonicity(&profile_of(lit)?, g)?]
        }
        CheckName::Positivity => {
            let lit = one_polygon(args, name)?;
            let g = need(args.genus, "-g", name)?;
            computation(lit, g)?;
            vec![checks::positivity(&profile_of(lit)?, g, args.trials, seed)?]
        }
        CheckName::Polynomiality => {
            let lit = one_polygon(args, name)?;
            let g = need(args.genus, "-g", name)?;
            let i = need(args.i, "-i", name)?;
            computation(lit, g)?;
            vec![checks::polynomiality(&profile_of(lit)?, g, i)?]
        }
        CheckName::CornerCut => {
            let lit = one_polygon(args, name)?;
            let g = need(args.genus, "-g", name)?;
            let comp = computation(lit, g)?;
            let cut = match &args.cut {
                Some(c) => profile_of(c)?,
                None => polygon(lit)?
                    .cut_top_corner()
                    .and_then(|p| p.profile())
                    .map_err(|source| CliError::Polygon { literal: lit.to_string(), source })?,
            };
            let cut_s_max = cut.data().map(|d| d.s_max(g).max(0) as usize).unwrap_or(0);
            let upto = comp.s_max().saturating_sub(1).min(cut_s_max);
            s_values(args.s, upto)
                .into_iter()
                .map(|s| checks::corner_cut(comp.profile(), &cut, g, s))
                .collect::<Result<_, _>>()?
        }
        CheckName::LatticeInvariance => {
            let g = need(args.genus, "-g", name)?;
            let text = args
                .transform
                .as_deref()
                .ok_or_else(|| CliError::Usage("check lattice-invariance requires --transform".into()))?;
            let t = parse_transform(text)?;
            let (p1, p2) = match args.polygons.as_slice() {
                [a] => {
                    let p = polygon(a)?;
                    let image = p.apply_transform(&t);
                    (p, image)
                }
                [a, b] => (polygon(a)?, polygon(b)?),
                _ => return Err(CliError::Usage("check lattice-invariance takes one or two polygons".into())),
            };
            let s_max = p1.data().s_max(g).max(0) as usize;
            s_values(args.s, s_max)
                .into_iter()
                .map(|s| checks::lattice_invariance(&p1, &p2, &t, g, s))
                .collect::<Result<_, _>>()?
        }
    };

    let failed = reports.iter().any(Report::failed);
    for r in &reports {
        if out.text() {
            out.line(r);
        } else {
            out.record("check", &r.check);
            out.record("params", &r.params);
            out.record("status", r.status);
            out.record("lhs", &r.lhs);
            out.record("rhs", &r.rhs);
            if let Some(note) = &r.note {
                out.record("note", note);
            }
        }
    }
    Ok(if failed { EXIT_CHECK_FAILED } else { EXIT_OK })
}

fn parse_transform(text: &str) -> Result<LatticeTransform, CliError> {
    let v: Vec<i64> = text
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("invalid transform `{text}`")))?;
    if v.len() != 6 {
        return Err(CliError::Usage(format!("transform `{text}` needs six integers")));
    }
    LatticeTransform::new([[v[0], v[1]], [v[2], v[3]]], (v[4], v[5]))
        .map_err(|e| CliError::Usage(format!("invalid transform `{text}`: {e}")))
}
