//! Command line driver for the web evaluation engine: relation
//! verification campaigns, single-web evaluation on a chosen boundary
//! pair, graph ball export, and subspace counting. All arithmetic is
//! exact and every report is deterministic for a fixed configuration.
//!
//! Exit codes: 0 success, 1 relation disagreements found, 2 usage or
//! input errors, 3 precision budget exhausted (rerun with a larger
//! `--radius`).

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use webgpa::bruhat_tits::{BruhatTits, LatticeClass};
use webgpa::coeffs::gaussian_binomial;
use webgpa::eval::{
    eval_web, exhaustive_pairs, sampled_pairs, verify_relation, BoundaryPair, ModelInfo, Report,
};
use webgpa::field::{CoeffField, FieldSpec, PrimeField, Rationals};
use webgpa::graph::{ball, export_ball_dot, export_ball_json, BuildingGraph, Path};
use webgpa::parser::parse;
use webgpa::relations::{default_instances, relation_instance, RelationId, RelationInstance};
use webgpa::web::Web;
use webgpa::weight_lattice::{WeightLattice, WlVertex};
use webgpa::{Error, Result};

#[derive(Parser)]
#[command(name = "webgpa", version, about = "Exact web evaluation on building graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the web relations on a model and emit a JSON report.
    VerifyRelations(VerifyArgs),
    /// Evaluate one web on one boundary path pair.
    EvalWeb(EvalArgs),
    /// Export a ball of the graph as JSON or DOT.
    ExportGraph(ExportArgs),
    /// Print the number of k-dimensional subspaces of F_q^n.
    Count(CountArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelKind {
    /// The rank-n weight lattice (residue order 1).
    WeightLattice,
    /// Lattice classes over Q_q, for a prime q.
    BruhatTits,
}

#[derive(Args)]
struct ModelArgs {
    /// Graph model.
    #[arg(long, value_enum)]
    model: ModelKind,
    /// Ambient rank n; strand labels live in 1..=n.
    #[arg(long)]
    n: usize,
    /// Residue field order, a prime; required by the lattice-class model.
    #[arg(long)]
    q: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Coefficient field: Q, or F<p> for a prime p.
    #[arg(long, default_value = "Q")]
    field: String,
    /// Working ball radius for the lattice-class model.
    #[arg(long, default_value_t = 6)]
    radius: usize,
    /// Seed for boundary sampling on the lattice-class model.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sampled boundary pairs per relation instance (lattice-class model;
    /// the weight lattice is checked exhaustively).
    #[arg(long, default_value_t = 200)]
    max_pairs: usize,
    /// Comma-separated relation names to run (default: all).
    #[arg(long, value_delimiter = ',')]
    relations: Vec<String>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Coefficient field: Q, or F<p> for a prime p.
    #[arg(long, default_value = "Q")]
    field: String,
    /// Working ball radius for the lattice-class model.
    #[arg(long, default_value_t = 6)]
    radius: usize,
    /// Web source file: `web n=<n> dom=[...] { [layer]* }`.
    #[arg(long)]
    web: PathBuf,
    /// Boundary JSON: `{"p1": [vertex, ...], "p2": [vertex, ...]}`, each
    /// path a vertex sequence; edge labels are read off the graph.
    #[arg(long)]
    boundary: PathBuf,
    /// Also write a JSON record of the evaluation here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Json,
    Dot,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Ball radius around the base vertex.
    #[arg(long, default_value_t = 1)]
    radius: usize,
    #[arg(long, value_enum, default_value_t = ExportFormat::Json)]
    format: ExportFormat,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CountArgs {
    /// Ambient dimension.
    #[arg(long)]
    n: usize,
    /// Subspace dimension.
    #[arg(long)]
    k: usize,
    /// Field order; q = 1 degenerates to the ordinary binomial.
    #[arg(long)]
    q: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Error::Precision { needed, budget }) => {
            eprintln!("error: valuation {needed} exceeds the budget {budget}");
            eprintln!("hint: rerun with --radius {}", needed.saturating_sub(2));
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::VerifyRelations(a) => cmd_verify(a),
        Cmd::EvalWeb(a) => cmd_eval(a),
        Cmd::ExportGraph(a) => cmd_export(a),
        Cmd::Count(a) => cmd_count(a),
    }
}

fn require_q(model: &ModelArgs) -> Result<u64> {
    match (model.model, model.q) {
        (ModelKind::BruhatTits, Some(q)) => Ok(q),
        (ModelKind::BruhatTits, None) => {
            Err(Error::invalid("--q is required for --model bruhat-tits"))
        }
        (ModelKind::WeightLattice, Some(_)) => {
            Err(Error::invalid("--q only applies to --model bruhat-tits"))
        }
        (ModelKind::WeightLattice, None) => Ok(1),
    }
}

/// Positive-characteristic agreement on the lattice-class model needs
/// p >= n-1 and q = 1 mod p; anything else is a legitimate experiment
/// that deserves a heads-up, not a refusal. Characteristic zero is the
/// designated negative test and never warns.
fn warn_off_hypotheses(n: usize, q: u64, spec: FieldSpec) {
    if let FieldSpec::Prime(p) = spec {
        if p < (n as u64).saturating_sub(1) || q % p != 1 {
            eprintln!(
                "warning: expect disagreements unless p >= n-1 and q = 1 mod p \
                 (got n={n}, q={q}, p={p}); running anyway"
            );
        }
    }
}

/// A few base vertices of every type from the radius-1 ball around the
/// center, so sampling sees each type class.
fn bases_by_type<G: BuildingGraph>(g: &G, center: &G::V, per_type: usize) -> Result<Vec<G::V>> {
    let mut picked = Vec::new();
    let mut counts = vec![0usize; g.rank()];
    for v in ball(g, center, 1)? {
        let t = g.type_of(&v);
        if counts[t] < per_type {
            counts[t] += 1;
            picked.push(v);
        }
    }
    Ok(picked)
}

#[derive(Serialize)]
struct RunConfig {
    model: ModelInfo,
    field: String,
    radius: usize,
    seed: u64,
    max_pairs: usize,
    relations: Vec<String>,
}

#[derive(Serialize)]
struct MergedReport {
    config: RunConfig,
    reports: Vec<Report>,
    total_pairs: usize,
    total_failures: usize,
}

fn parse_relation_filter(names: &[String]) -> Result<Option<BTreeSet<RelationId>>> {
    if names.is_empty() {
        return Ok(None);
    }
    let mut set = BTreeSet::new();
    for name in names {
        set.insert(name.parse::<RelationId>()?);
    }
    Ok(Some(set))
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode> {
    let spec = FieldSpec::parse(&a.field)?;
    let filter = parse_relation_filter(&a.relations)?;
    let instances: Vec<RelationInstance> = default_instances(a.model.n)
        .into_iter()
        .filter(|inst| filter.as_ref().is_none_or(|f| f.contains(&inst.id)))
        .collect();
    if instances.is_empty() {
        return Err(Error::invalid("no relation instance matches the filter at this rank"));
    }
    match a.model.model {
        ModelKind::WeightLattice => {
            require_q(&a.model)?;
            let g = WeightLattice::new(a.model.n)?;
            let base = WlVertex::origin(a.model.n);
            let model = ModelInfo::weight_lattice(a.model.n);
            verify_suite(&g, model, &[base], true, &a, spec, &instances)
        }
        ModelKind::BruhatTits => {
            let q = require_q(&a.model)?;
            let g = BruhatTits::new(a.model.n, q, a.radius)?;
            warn_off_hypotheses(a.model.n, q, spec);
            let bases = bases_by_type(&g, &g.standard_vertex(), 2)?;
            let model = ModelInfo::bruhat_tits(a.model.n, q);
            verify_suite(&g, model, &bases, false, &a, spec, &instances)
        }
    }
}

fn verify_suite<G: BuildingGraph>(
    g: &G,
    model: ModelInfo,
    bases: &[G::V],
    exhaustive: bool,
    a: &VerifyArgs,
    spec: FieldSpec,
    instances: &[RelationInstance],
) -> Result<ExitCode> {
    let reports = match spec {
        FieldSpec::Rational => {
            verify_over(g, &model, bases, exhaustive, a, &Rationals, instances)?
        }
        FieldSpec::Prime(p) => {
            verify_over(g, &model, bases, exhaustive, a, &PrimeField::new(p)?, instances)?
        }
    };
    let total_pairs = reports.iter().map(|r| r.pairs_tested).sum();
    let total_failures = reports.iter().map(|r| r.failures.len()).sum::<usize>();
    let merged = MergedReport {
        config: RunConfig {
            model,
            field: spec.name(),
            radius: a.radius,
            seed: a.seed,
            max_pairs: a.max_pairs,
            relations: instances.iter().map(|i| i.id.name().to_string()).collect(),
        },
        reports,
        total_pairs,
        total_failures,
    };
    let text = serde_json::to_string_pretty(&merged)?;
    match &a.out {
        Some(path) => fs::write(path, text + "\n")?,
        None => println!("{text}"),
    }
    eprintln!(
        "{} instances, {total_pairs} pairs, {total_failures} disagreements",
        merged.reports.len()
    );
    Ok(if total_failures == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn verify_over<G: BuildingGraph, F: CoeffField>(
    g: &G,
    model: &ModelInfo,
    bases: &[G::V],
    exhaustive: bool,
    a: &VerifyArgs,
    field: &F,
    instances: &[RelationInstance],
) -> Result<Vec<Report>> {
    let mut reports = Vec::with_capacity(instances.len());
    for inst in instances {
        let sides = relation_instance(a.model.n, inst.id, &inst.params)?;
        let pairs = if exhaustive {
            let mut all = Vec::new();
            for base in bases {
                all.extend(exhaustive_pairs(g, base, sides.0.dom(), sides.0.cod())?);
            }
            all
        } else {
            sampled_pairs(g, bases, sides.0.dom(), sides.0.cod(), a.seed, a.max_pairs)?
        };
        reports.push(verify_relation(g, model, inst, &sides, &pairs, field)?);
    }
    Ok(reports)
}

#[derive(Deserialize)]
struct BoundarySpec<V> {
    p1: Vec<V>,
    p2: Vec<V>,
}

/// Rebuild a labeled path from a bare vertex sequence; every consecutive
/// pair must be an edge of the graph.
fn path_from_vertices<G: BuildingGraph>(g: &G, verts: &[G::V], which: &str) -> Result<Path<G::V>> {
    let first = verts
        .first()
        .ok_or_else(|| Error::invalid(format!("{which} needs at least a start vertex")))?;
    let mut p = Path::new(first.clone());
    for v in &verts[1..] {
        match g.edge_label(p.end(), v)? {
            Some(m) => p.push(m, v.clone()),
            None => {
                return Err(Error::invalid(format!(
                    "{which}: {} and {v} are not adjacent",
                    p.end()
                )))
            }
        }
    }
    Ok(p)
}

fn cmd_eval(a: EvalArgs) -> Result<ExitCode> {
    let spec = FieldSpec::parse(&a.field)?;
    let web = parse(&fs::read_to_string(&a.web)?)?;
    if web.n() != a.model.n {
        return Err(Error::invalid(format!(
            "--n {} disagrees with the web header n={}",
            a.model.n,
            web.n()
        )));
    }
    let boundary = fs::read_to_string(&a.boundary)?;
    match a.model.model {
        ModelKind::WeightLattice => {
            require_q(&a.model)?;
            let g = WeightLattice::new(a.model.n)?;
            let b: BoundarySpec<WlVertex> = serde_json::from_str(&boundary)?;
            eval_on(&g, &web, &b, spec, a.out.as_deref())
        }
        ModelKind::BruhatTits => {
            let q = require_q(&a.model)?;
            let g = BruhatTits::new(a.model.n, q, a.radius)?;
            let b: BoundarySpec<LatticeClass> = serde_json::from_str(&boundary)?;
            eval_on(&g, &web, &b, spec, a.out.as_deref())
        }
    }
}

fn eval_on<G: BuildingGraph>(
    g: &G,
    web: &Web,
    b: &BoundarySpec<G::V>,
    spec: FieldSpec,
    out: Option<&FsPath>,
) -> Result<ExitCode> {
    let p1 = path_from_vertices(g, &b.p1, "p1")?;
    let p2 = path_from_vertices(g, &b.p2, "p2")?;
    let bp = BoundaryPair::new(g, p1, p2)?;
    let value = match spec {
        FieldSpec::Rational => {
            let f = Rationals;
            f.display(&eval_web(g, web, &bp, &f)?)
        }
        FieldSpec::Prime(p) => {
            let f = PrimeField::new(p)?;
            f.display(&eval_web(g, web, &bp, &f)?)
        }
    };
    println!("{value}");
    if let Some(path) = out {
        let record = serde_json::json!({
            "web": web.to_string(),
            "dom": web.dom().labels(),
            "cod": web.codomain().labels(),
            "field": spec.name(),
            "p1": bp.p1().to_json(),
            "p2": bp.p2().to_json(),
            "value": value,
        });
        fs::write(path, serde_json::to_string_pretty(&record)? + "\n")?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_export(a: ExportArgs) -> Result<ExitCode> {
    match a.model.model {
        ModelKind::WeightLattice => {
            require_q(&a.model)?;
            let g = WeightLattice::new(a.model.n)?;
            export_on(&g, WlVertex::origin(a.model.n), &a)
        }
        ModelKind::BruhatTits => {
            let q = require_q(&a.model)?;
            let g = BruhatTits::new(a.model.n, q, a.radius)?;
            let base = g.standard_vertex();
            export_on(&g, base, &a)
        }
    }
}

fn export_on<G: BuildingGraph>(g: &G, base: G::V, a: &ExportArgs) -> Result<ExitCode> {
    let text = match a.format {
        ExportFormat::Json => {
            serde_json::to_string_pretty(&export_ball_json(g, &base, a.radius)?)? + "\n"
        }
        ExportFormat::Dot => export_ball_dot(g, &base, a.radius)?,
    };
    match &a.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_count(a: CountArgs) -> Result<ExitCode> {
    if a.q == 0 {
        return Err(Error::invalid("--q must be at least 1"));
    }
    println!("{}", gaussian_binomial(a.n, a.k as i64, a.q));
    Ok(ExitCode::SUCCESS)
}
