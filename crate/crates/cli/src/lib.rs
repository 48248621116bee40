//! Command implementations for the `chainmail` binary.
//!
//! Every command renders a plain-text report beginning with a schema header.
//! Input problems surface as `Err` (exit code 2); mathematical failures are
//! reports with exit code 1.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use chainmail_core::family::{
    check_genex_hypotheses, family_member, obstruction_threshold, prospect_base_graphs, verify_family_invariance,
    FamilyError, FamilySpec, ProspectBounds,
};
use chainmail_core::graph::{parse_graph, serialize_graph};
use chainmail_core::linalg::{determinant, signature};
use chainmail_core::pi1::{presentation_from_graph, weight_one_certificate, GroupPresentation};
use chainmail_core::spin::{characteristic_subgraphs, homology_group, render_spin_table};
use chainmail_core::tait::{checkerboard_coloring, parse_pd, reduce_tait, white_tait_graph, Color, TaitError};
use chainmail_core::ChainmailGraph;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "chainmail", version, about = "Surgery invariants and Dehn-surgery obstructions for chainmail graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Laplacian, determinant, signature, homology and spin structures.
    Analyze {
        graph: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Check the family hypotheses and verify invariance along D_n.
    Family {
        graph: PathBuf,
        #[arg(long)]
        pivot: String,
        #[arg(long, default_value_t = 100)]
        n_max: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Emit an obstruction certificate with an explicit threshold N.
    Certify {
        graph: PathBuf,
        #[arg(long)]
        pivot: String,
        #[command(flatten)]
        out: Output,
    },
    /// White Tait graph and reduced Tait graph of a PD code.
    Tait {
        pd: PathBuf,
        #[arg(long, default_value = "black")]
        outer_color: Color,
        /// Root vertex id (default: the white face with the longest boundary).
        #[arg(long)]
        root: Option<String>,
        /// Directory receiving tait.json and reduced.json.
        #[arg(short = 'o', long = "output-dir")]
        output_dir: Option<PathBuf>,
    },
    /// Group presentation and weight-one certificates.
    Pi1 {
        graph: PathBuf,
        /// Generator to kill: a generator name such as x3 or a vertex id.
        #[arg(long)]
        kill: String,
        /// Inclusive range `a..b` of family members D_n to certify.
        #[arg(long)]
        n_range: Option<String>,
        /// Pivot vertex for --n-range.
        #[arg(long)]
        pivot: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Search small graphs passing every family hypothesis.
    Prospect {
        #[arg(long)]
        max_vertices: usize,
        /// Inclusive weight range `lo..hi`.
        #[arg(long, allow_hyphen_values = true)]
        weight_range: String,
        #[arg(long)]
        max_mult: i64,
        #[arg(long, default_value_t = ProspectBounds::DEFAULT_CANDIDATE_LIMIT)]
        candidate_limit: u64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the report here instead of standard output.
    #[arg(short = 'o', long = "output")]
    pub path: Option<PathBuf>,
}

/// A finished report and the exit code it carries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub text: String,
    pub code: u8,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, code: EXIT_OK }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> Result<ChainmailGraph> {
    parse_graph(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("  {l}\n")).collect()
}

pub fn parse_range(text: &str) -> Result<(u64, u64)> {
    let (a, b) = text
        .split_once("..=")
        .or_else(|| text.split_once(".."))
        .ok_or_else(|| anyhow!("expected a range like 0..50, got {text:?}"))?;
    let a: u64 = a.trim().parse().with_context(|| format!("bad range start {a:?}"))?;
    let b: u64 = b.trim().parse().with_context(|| format!("bad range end {b:?}"))?;
    if a > b {
        bail!("empty range {text:?}");
    }
    Ok((a, b))
}

pub fn parse_signed_range(text: &str) -> Result<(i64, i64)> {
    let split = text[1..].find("..").map(|k| k + 1).ok_or_else(|| anyhow!("expected a range like -5..5, got {text:?}"))?;
    let a: i64 = text[..split].trim().parse().with_context(|| format!("bad range start in {text:?}"))?;
    let rest = &text[split + 2..];
    let b: i64 = rest.strip_prefix('=').unwrap_or(rest).trim().parse().with_context(|| format!("bad range end in {text:?}"))?;
    Ok((a, b))
}

pub fn cmd_analyze(path: &Path) -> Result<Report> {
    let g = load_graph(path)?;
    let a = g.laplacian();
    let spins = characteristic_subgraphs(&g)?;
    let mut out = String::new();
    writeln!(out, "# chainmail analysis v1")?;
    writeln!(out, "graph:")?;
    out.push_str(&indent(&serialize_graph(&g)));
    writeln!(out, "laplacian: {}", a.as_matrix())?;
    writeln!(out, "det: {}", determinant(&a))?;
    writeln!(out, "signature: {}", signature(&a))?;
    writeln!(out, "homology: {}", homology_group(&g).padded(g.vertex_count()))?;
    writeln!(out, "spin structures: {}", spins.len())?;
    out.push_str(&indent(&render_spin_table(&g, &spins)));
    writeln!(out, "notes:")?;
    if g.is_empty() {
        writeln!(out, "  - empty diagram: surgery on the empty link gives S^3")?;
    }
    writeln!(out, "  - b2 = |V| + |f| - 2 and sigma = sigma(A) - f for the spin filling of each spin structure")?;
    Ok(Report::ok(out))
}

fn family_spec(g: ChainmailGraph, pivot: &str) -> Result<FamilySpec> {
    FamilySpec::new(g, pivot).map_err(|e| anyhow!("{e}"))
}

pub fn cmd_family(path: &Path, pivot: &str, n_max: u64) -> Result<Report> {
    let spec = family_spec(load_graph(path)?, pivot)?;
    let report = check_genex_hypotheses(&spec.base, pivot)?;
    let mut out = String::new();
    writeln!(out, "# chainmail family report v1")?;
    writeln!(out, "pivot: {pivot}")?;
    writeln!(out, "hypotheses:")?;
    out.push_str(&indent(&report.render(pivot)));
    if !report.all_pass {
        writeln!(out, "invariance: skipped (hypotheses fail)")?;
        return Ok(Report { text: out, code: EXIT_FAILURE });
    }
    let inv = verify_family_invariance(&spec, n_max)?;
    writeln!(out, "invariance:")?;
    out.push_str(&indent(&inv.render(&spec)));
    let code = if inv.passed() { EXIT_OK } else { EXIT_FAILURE };
    Ok(Report { text: out, code })
}

pub fn cmd_certify(path: &Path, pivot: &str) -> Result<Report> {
    let spec = family_spec(load_graph(path)?, pivot)?;
    match obstruction_threshold(&spec) {
        Ok(cert) => Ok(Report::ok(cert.render())),
        Err(e @ (FamilyError::OddHomology(_) | FamilyError::HypothesesFailed(_))) => Ok(Report {
            text: format!("# chainmail obstruction certificate v1\npivot: {pivot}\nno certificate: {e}\n"),
            code: EXIT_FAILURE,
        }),
        Err(e) => Err(e.into()),
    }
}

pub struct TaitOutput {
    pub report: Report,
    pub tait_json: String,
    pub reduced_json: String,
}

pub fn cmd_tait(path: &Path, outer: Color, root: Option<&str>) -> Result<TaitOutput> {
    let pd = parse_pd(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    let mut out = String::new();
    writeln!(out, "# chainmail tait v1")?;
    writeln!(out, "pd: {pd}")?;
    writeln!(out, "crossings: {}", pd.crossing_count())?;
    writeln!(out, "outer color: {outer}")?;
    let coloring = checkerboard_coloring(&pd, outer).context("tracing faces")?;
    writeln!(out, "faces: {} (outer f{})", coloring.faces.len(), coloring.outer)?;
    let tait = match white_tait_graph(&pd, &coloring) {
        Ok(t) => t,
        Err(e @ TaitError::Nugatory { .. }) => {
            writeln!(out, "error: {e}")?;
            let report = Report { text: out, code: EXIT_FAILURE };
            return Ok(TaitOutput { report, tait_json: String::new(), reduced_json: String::new() });
        }
        Err(e) => return Err(e.into()),
    };
    let tait = match root {
        Some(r) => tait.with_root(r)?,
        None => tait,
    };
    let reduced = reduce_tait(&tait, &tait.root)?;
    writeln!(out, "root: {}", tait.root)?;
    writeln!(out, "tait graph:")?;
    out.push_str(&indent(&serialize_graph(&tait.underlying)));
    writeln!(out, "reduced graph:")?;
    out.push_str(&indent(&serialize_graph(&reduced)));
    writeln!(out, "homology of branched double cover: {}", homology_group(&reduced).padded(reduced.vertex_count()))?;
    writeln!(out, "determinant: {}", determinant(&reduced.laplacian()).magnitude())?;
    Ok(TaitOutput {
        report: Report::ok(out),
        tait_json: serialize_graph(&tait.underlying),
        reduced_json: serialize_graph(&reduced),
    })
}

fn resolve_generator(p: &GroupPresentation, g: &ChainmailGraph, name: &str) -> Result<usize> {
    if let Some(k) = p.generator_index(name) {
        return Ok(k);
    }
    g.index_of(name).map_err(|_| anyhow!("no generator or vertex named {name:?}"))
}

const ORDER_NOTE: &str = "relator factors: power of x_v first, then one factor per edge in rotation order \
                          (else by target vertex); other factor orders agree after abelianization";

pub fn cmd_pi1(path: &Path, kill: &str, n_range: Option<&str>, pivot: Option<&str>) -> Result<Report> {
    let base = load_graph(path)?;
    let mut out = String::new();
    writeln!(out, "# chainmail pi1 report v1")?;
    let members: Vec<(Option<u64>, ChainmailGraph)> = match n_range {
        None => vec![(None, base.clone())],
        Some(r) => {
            let (a, b) = parse_range(r)?;
            let pivot = pivot.ok_or_else(|| anyhow!("--n-range needs --pivot"))?;
            let spec = family_spec(base.clone(), pivot)?;
            writeln!(out, "family: pivot {pivot}, n = {a}..={b}")?;
            (a..=b).map(|n| (Some(n), family_member(&spec, n))).collect()
        }
    };
    writeln!(out, "note: {ORDER_NOTE}")?;
    let first = presentation_from_graph(&members[0].1);
    let g0 = resolve_generator(&first, &base, kill)?;
    let mut all_valid = true;
    let mut table = String::new();
    for (k, (n, g)) in members.iter().enumerate() {
        let p = presentation_from_graph(g);
        let cert = weight_one_certificate(&p, g0);
        all_valid &= cert.is_valid();
        if k == 0 {
            if let Some(n) = n {
                writeln!(out, "presentation at n = {n}:")?;
            } else {
                writeln!(out, "presentation:")?;
            }
            out.push_str(&indent(&p.to_string()));
            writeln!(out, "abelianization: {}", chainmail_core::pi1::abelianization(&p))?;
            writeln!(out, "certificate:")?;
            out.push_str(&indent(&cert.render()));
        }
        let exps: Vec<String> = cert.final_exponents.iter().map(|e| e.to_string()).collect();
        writeln!(
            table,
            "  {}exponents={{{}}} gcd={} {}",
            n.map(|n| format!("n={n} ")).unwrap_or_default(),
            exps.join(", "),
            cert.gcd,
            if cert.is_valid() { "valid" } else { "inconclusive" }
        )?;
    }
    writeln!(out, "table:")?;
    out.push_str(&table);
    writeln!(out, "result: {}", if all_valid { "all certificates valid" } else { "some certificates inconclusive" })?;
    Ok(Report { text: out, code: if all_valid { EXIT_OK } else { EXIT_FAILURE } })
}

pub fn cmd_prospect(max_vertices: usize, weight_range: &str, max_mult: i64, candidate_limit: u64) -> Result<Report> {
    let mut bounds = ProspectBounds::new(max_vertices, max_mult, parse_signed_range(weight_range)?);
    bounds.candidate_limit = candidate_limit;
    let result = prospect_base_graphs(&bounds)?;
    let mut out = String::new();
    writeln!(out, "# chainmail prospect v1")?;
    writeln!(
        out,
        "bounds: max_vertices={} weight_range={}..={} max_mult={} candidate_limit={}",
        max_vertices, bounds.weight_range.0, bounds.weight_range.1, max_mult, candidate_limit
    )?;
    writeln!(out, "candidates examined: {}", result.candidates_examined)?;
    writeln!(out, "partial: {}", result.partial)?;
    writeln!(out, "specs: {}", result.specs.len())?;
    for (k, spec) in result.specs.iter().enumerate() {
        writeln!(out, "spec {}: pivot {}", k + 1, spec.pivot)?;
        out.push_str(&indent(&serialize_graph(&spec.base)));
    }
    Ok(Report::ok(out))
}

fn emit(report: Report, out: &Output) -> Result<Report> {
    if let Some(path) = &out.path {
        fs::write(path, &report.text).with_context(|| format!("writing {}", path.display()))?;
        return Ok(Report { text: String::new(), code: report.code });
    }
    Ok(report)
}

/// Runs a parsed command. The returned report text goes to standard output.
pub fn run(cli: Cli) -> Result<Report> {
    match cli.command {
        Command::Analyze { graph, out } => emit(cmd_analyze(&graph)?, &out),
        Command::Family { graph, pivot, n_max, out } => emit(cmd_family(&graph, &pivot, n_max)?, &out),
        Command::Certify { graph, pivot, out } => emit(cmd_certify(&graph, &pivot)?, &out),
        Command::Tait { pd, outer_color, root, output_dir } => {
            let t = cmd_tait(&pd, outer_color, root.as_deref())?;
            if let (Some(dir), EXIT_OK) = (output_dir, t.report.code) {
                fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                fs::write(dir.join("tait.json"), &t.tait_json)?;
                fs::write(dir.join("reduced.json"), &t.reduced_json)?;
            }
            Ok(t.report)
        }
        Command::Pi1 { graph, kill, n_range, pivot, out } => {
            emit(cmd_pi1(&graph, &kill, n_range.as_deref(), pivot.as_deref())?, &out)
        }
        Command::Prospect { max_vertices, weight_range, max_mult, candidate_limit, out } => {
            emit(cmd_prospect(max_vertices, &weight_range, max_mult, candidate_limit)?, &out)
        }
    }
}
