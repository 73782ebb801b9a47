mod input;
mod render;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use evasion_core::action::{fixed_set, quotient_complex};
use evasion_core::chain::HomologyReport;
use evasion_core::collapse::{
    collapse_onto, search_collapsible, CollapseOntoOutcome, CollapseOutcome, DEFAULT_NODE_BUDGET,
};
use evasion_core::dtree::DtcSolver;
use evasion_core::graph::{check_invariant, check_monotone, delta_of_property, DEFAULT_SEED};
use evasion_core::theorems::{
    kss_evasiveness_check, lower_bound_check, suite_cases, yao_check, TheoremId, TheoremReport,
};
use evasion_core::{barycentric_subdivision, Complex, Prime};

use input::{load_group, ComplexArgs, PropertyArgs};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Parser, Debug)]
#[command(
    name = "evasion",
    version,
    about = "Simplicial complexes, F_p homology and evasiveness of graph properties"
)]
struct Cli {
    /// Prime field for homology computations.
    #[arg(short = 'p', long = "prime", global = true, default_value_t = 2)]
    prime: u64,

    /// Seed for randomized inputs and randomized property checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED, value_parser = parse_seed)]
    seed: u64,

    /// Node budget for collapse searches.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,

    /// Worker threads for `verify`; output order does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduced F_p homology dimensions of a complex.
    Homology(ComplexArgs),
    /// Search for a collapse to a point, or onto a subcomplex with --onto.
    Collapse {
        #[command(flatten)]
        complex: ComplexArgs,
        /// Facets of the target subcomplex as a JSON array.
        #[arg(long)]
        onto: Option<String>,
    },
    /// Barycentric subdivision with its vertex dictionary.
    Subdivide(ComplexArgs),
    /// Orbit complex and invariant simplices under a permutation group.
    Quotient {
        #[command(flatten)]
        complex: ComplexArgs,
        /// Group generator in cycle notation or as an image array; repeatable.
        #[arg(long = "perm", required = true)]
        perms: Vec<String>,
    },
    /// The complex of edge sets on which a monotone property fails.
    Delta(PropertyArgs),
    /// Decision-tree complexity of a property, with an optimal tree.
    Dtc {
        #[command(flatten)]
        property: PropertyArgs,
        /// Include an optimal decision tree in the output.
        #[arg(long)]
        tree: bool,
    },
    /// Run theorem checks: the shipped instances, or one property with --property/--table.
    Verify {
        /// Theorem id or `all`.
        theorem: String,
        #[command(flatten)]
        property: PropertyArgs,
    },
    /// Graphviz rendering of a complex's face poset or a property's optimal tree.
    ExportDot {
        #[command(flatten)]
        complex: ComplexArgs,
        #[command(flatten)]
        property: PropertyArgs,
    },
}

fn parse_seed(text: &str) -> Result<u64, String> {
    let parsed = match text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => text.parse(),
    };
    parsed.map_err(|e| format!("`{text}`: {e}"))
}

/// What a subcommand produced: a JSON value with a text rendering, or a DOT
/// document.
enum Output {
    Data { json: Value, text: String },
    Dot(String),
}

struct Run {
    output: Output,
    failed: bool,
}

impl Run {
    fn ok(json: Value, text: String) -> Self {
        Run {
            output: Output::Data { json, text },
            failed: false,
        }
    }
}

fn prime(cli: &Cli) -> Result<Prime, CliError> {
    Prime::new(cli.prime).map_err(|e| CliError::usage(format!("-p/--prime: {e}")))
}

fn degree_of(c: &Complex) -> usize {
    c.vertices().last().map_or(0, |&v| v as usize + 1)
}

fn homology(cli: &Cli, args: &ComplexArgs) -> Result<Run, CliError> {
    let c = args.load(cli.seed)?;
    let report = HomologyReport::new(&c, prime(cli)?);
    let chi = c.euler_characteristic();
    let f_vector: Vec<usize> = (0..=c.dim().unwrap_or(0)).map(|d| c.count_of_dim(d)).collect();
    let text = format!(
        "p = {}\nreduced dims = {:?}\neuler characteristic = {chi}\nf-vector = {f_vector:?}",
        report.p, report.reduced_dims
    );
    let json = json!({
        "p": report.p,
        "reduced_dims": report.reduced_dims,
        "acyclic": !report.empty_complex && report.reduced_dims.iter().all(|&d| d == 0),
        "euler_characteristic": chi,
        "f_vector": f_vector,
    });
    Ok(Run::ok(json, text))
}

fn collapse(cli: &Cli, args: &ComplexArgs, onto: Option<&str>) -> Result<Run, CliError> {
    let c = args.load(cli.seed)?;
    let (json, text) = match onto {
        None => match search_collapsible(&c, cli.node_budget) {
            CollapseOutcome::Collapsible(seq) => (
                json!({ "outcome": "collapsible", "steps": seq.steps, "terminal": seq.terminal.facets_json() }),
                format!(
                    "collapsible in {} steps\n{}",
                    seq.steps.len(),
                    render::steps_text(&seq.steps)
                ),
            ),
            CollapseOutcome::NotCollapsible => (json!({ "outcome": "not_collapsible" }), "not collapsible".into()),
            CollapseOutcome::BudgetExceeded { explored } => (
                json!({ "outcome": "budget_exceeded", "explored": explored }),
                format!("undecided after {explored} states"),
            ),
        },
        Some(target) => {
            let lists: Vec<Vec<u32>> =
                serde_json::from_str(target).map_err(|e| CliError::usage(format!("--onto: {e}")))?;
            let target = Complex::from_vertex_lists(lists).map_err(|e| CliError::usage(format!("--onto: {e}")))?;
            match collapse_onto(&c, &target, cli.node_budget).map_err(|e| CliError::usage(format!("--onto: {e}")))? {
                CollapseOntoOutcome::Certificate(seq) => (
                    json!({ "outcome": "certificate", "steps": seq.steps, "terminal": seq.terminal.facets_json() }),
                    format!(
                        "collapses onto the target in {} steps\n{}",
                        seq.steps.len(),
                        render::steps_text(&seq.steps)
                    ),
                ),
                CollapseOntoOutcome::Unknown { explored, exhausted } => (
                    json!({ "outcome": "unknown", "explored": explored, "exhausted": exhausted }),
                    if exhausted {
                        format!("no collapse onto the target ({explored} states, search exhausted)")
                    } else {
                        format!("no certificate within {explored} states")
                    },
                ),
            }
        }
    };
    Ok(Run::ok(json, text))
}

fn subdivide(cli: &Cli, args: &ComplexArgs) -> Result<Run, CliError> {
    let c = args.load(cli.seed)?;
    let (bar, dict) = barycentric_subdivision(&c);
    let labels: Vec<Value> = dict
        .entries()
        .map(|(v, s)| json!({ "vertex": v, "simplex": s }))
        .collect();
    let text = format!(
        "{} simplices, {} facets, euler characteristic {}\n{}",
        bar.len(),
        bar.facets().len(),
        bar.euler_characteristic(),
        dict.entries()
            .map(|(v, s)| format!("{v} = {s}"))
            .collect::<Vec<_>>()
            .join("\n")
    );
    let json = json!({
        "facets": bar.facets(),
        "labels": labels,
        "euler_characteristic": bar.euler_characteristic(),
    });
    Ok(Run::ok(json, text))
}

fn quotient(cli: &Cli, args: &ComplexArgs, perms: &[String]) -> Result<Run, CliError> {
    let c = args.load(cli.seed)?;
    let g = load_group(perms, degree_of(&c))?;
    let q = quotient_complex(&c, &g).map_err(|e| CliError::usage(format!("--perm: {e}")))?;
    let fixed = fixed_set(&c, g.generators()).map_err(|e| CliError::usage(format!("--perm: {e}")))?;
    let text = format!(
        "group order {}\norbits {:?}\nquotient facets {}\ninvariant simplices {} ({})",
        g.order(),
        q.orbits,
        render::simplices_text(q.complex.facets()),
        render::simplices_text(&fixed.simplices),
        if fixed.is_subcomplex {
            "a subcomplex"
        } else {
            "not a subcomplex"
        }
    );
    let json = json!({
        "group_order": g.order(),
        "orbits": q.orbits,
        "quotient": q.complex.facets_json(),
        "quotient_euler_characteristic": q.complex.euler_characteristic(),
        "invariant_simplices": fixed.simplices,
        "invariant_is_subcomplex": fixed.is_subcomplex,
    });
    Ok(Run::ok(json, text))
}

fn delta(cli: &Cli, args: &PropertyArgs) -> Result<Run, CliError> {
    let h = args.load()?;
    let invariant = check_invariant(&h, cli.seed).map_err(|e| CliError::usage(format!("--property: {e}")))?;
    let d = delta_of_property(&h).map_err(|e| CliError::usage(format!("--property: {e}")))?;
    let text = format!(
        "{}: {} simplices on {} edges, euler characteristic {}\nfacets {}",
        h.name(),
        d.len(),
        h.edge_count(),
        d.euler_characteristic(),
        render::simplices_text(d.facets())
    );
    let json = json!({
        "property": h.name(),
        "edges": h.universe().edges(),
        "monotone": check_monotone(&h, cli.seed),
        "invariant": invariant,
        "facets": d.facets(),
        "euler_characteristic": d.euler_characteristic(),
    });
    Ok(Run::ok(json, text))
}

fn dtc(cli: &Cli, args: &PropertyArgs, with_tree: bool) -> Result<Run, CliError> {
    let h = args.load()?;
    let solver = DtcSolver::new(&h).map_err(|e| CliError::usage(format!("--property: {e}")))?;
    let d = solver.complexity();
    let m = solver.edge_count();
    if cli.format == Format::Dot {
        return Ok(Run {
            output: Output::Dot(solver.extract_tree().to_dot(h.universe())),
            failed: false,
        });
    }
    let mut json = json!({ "property": h.name(), "edges": m, "dtc": d, "evasive": d == m });
    if with_tree {
        json["tree"] = solver.extract_tree().to_json(h.universe());
    }
    let text = format!(
        "{}: D = {d} of {m} edges ({})",
        h.name(),
        if d == m { "evasive" } else { "not evasive" }
    );
    Ok(Run::ok(json, text))
}

fn verify(cli: &Cli, theorem: &str, property: &PropertyArgs) -> Result<Run, CliError> {
    let only = match theorem {
        "all" => None,
        id => Some(
            id.parse::<TheoremId>()
                .map_err(|e| CliError::usage(format!("theorem id: {e}")))?,
        ),
    };
    let results: Vec<(String, TheoremReport)> = if property.is_given() {
        let h = property.load()?;
        let report = match only {
            Some(TheoremId::KssEvasiveness) => kss_evasiveness_check(&h),
            Some(TheoremId::YaoBipartite) => yao_check(&h),
            Some(TheoremId::LowerBound) => lower_bound_check(&h, h.edge_count() <= 10),
            _ => {
                return Err(CliError::usage(
                    "--property/--table apply to kss-evasiveness, yao-bipartite and lower-bound only",
                ))
            }
        };
        vec![(h.name().to_string(), report)]
    } else {
        let cases = suite_cases(only);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads.max(1))
            .build()
            .map_err(|e| CliError::usage(format!("--threads: {e}")))?;
        pool.install(|| cases.par_iter().map(|c| (c.label.clone(), c.run())).collect())
    };
    let failed = results.iter().any(|(_, r)| r.failed());
    let text = results
        .iter()
        .map(|(label, r)| render::report_text(label, r))
        .collect::<Vec<_>>()
        .join("\n");
    let cases: Vec<Value> = results
        .iter()
        .map(|(label, r)| json!({ "label": label, "report": r }))
        .collect();
    let passed = results.iter().filter(|(_, r)| r.passed()).count();
    let failures = results.iter().filter(|(_, r)| r.failed()).count();
    eprintln!(
        "{passed} passed, {failures} failed, {} not applicable",
        results.len() - passed - failures
    );
    Ok(Run {
        output: Output::Data {
            json: json!({ "cases": cases, "failed": failed }),
            text,
        },
        failed,
    })
}

fn export_dot(cli: &Cli, complex: &ComplexArgs, property: &PropertyArgs) -> Result<Run, CliError> {
    let dot = if property.is_given() {
        let h = property.load()?;
        let solver = DtcSolver::new(&h).map_err(|e| CliError::usage(format!("--property: {e}")))?;
        solver.extract_tree().to_dot(h.universe())
    } else {
        render::face_poset_dot(&complex.load(cli.seed)?)
    };
    Ok(Run {
        output: Output::Dot(dot),
        failed: false,
    })
}

fn run(cli: &Cli) -> Result<Run, CliError> {
    let dot_capable = matches!(cli.command, Command::Dtc { .. } | Command::ExportDot { .. });
    if cli.format == Format::Dot && !dot_capable {
        return Err(CliError::usage("--format dot applies to dtc and export-dot only"));
    }
    match &cli.command {
        Command::Homology(args) => homology(cli, args),
        Command::Collapse { complex, onto } => collapse(cli, complex, onto.as_deref()),
        Command::Subdivide(args) => subdivide(cli, args),
        Command::Quotient { complex, perms } => quotient(cli, complex, perms),
        Command::Delta(args) => delta(cli, args),
        Command::Dtc { property, tree } => dtc(cli, property, *tree),
        Command::Verify { theorem, property } => verify(cli, theorem, property),
        Command::ExportDot { complex, property } => export_dot(cli, complex, property),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(run) => {
            match run.output {
                Output::Dot(dot) => print!("{dot}"),
                Output::Data { json, text } => match cli.format {
                    Format::Text => println!("{text}"),
                    _ => println!("{}", serde_json::to_string_pretty(&json).expect("serializable")),
                },
            }
            if run.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
