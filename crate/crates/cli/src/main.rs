use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use iocode::audit::{
    audit_graphs, audit_graphs_sampled, audit_trees, verify_tight_families, AuditOptions, AuditReport,
};
use iocode::constructive::{check_bound_for, construct_graph_code, construct_tree_code, BoundStatus};
use iocode::families::{
    build_family_tree, gen_reduced_subdivided_star, gen_star_plus_edge, gen_subcubic_gp, gen_subdivided_star,
    gen_tight_tree_pair, AttachmentVector, FamilySpec, StarEdge,
};
use iocode::format::{parse_graph, write_edge_list, write_graph6};
use iocode::solver::{solve, solve_oracle, solve_with_budget};
use iocode::verify::{is_io_code, signatures};
use iocode::{Graph, VertexSet};

/// Identifying open codes: verification, exact solving, constructions and audits.
#[derive(Parser)]
#[command(name = "iocode", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check whether CODE is an identifying open code of GRAPH.
    Verify { graph: PathBuf, code: String },
    /// Compute a minimum code.
    Solve {
        graph: PathBuf,
        /// Only decide whether a code of at most K vertices exists.
        #[arg(long)]
        budget: Option<usize>,
        /// Use brute-force enumeration instead of branch-and-bound.
        #[arg(long)]
        oracle: bool,
    },
    /// Build a code with the inductive construction.
    Construct {
        graph: PathBuf,
        /// Degree bound; defaults to max(3, maximum degree).
        #[arg(long)]
        delta: Option<usize>,
    },
    /// Emit a named family member.
    Generate(GenerateArgs),
    /// Run a batch certification.
    Audit {
        #[command(subcommand)]
        target: AuditTarget,
    },
    /// Print N(v) ∩ CODE for every vertex.
    Signature {
        graph: PathBuf,
        code: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    family: Family,
    /// Family parameters: Δ, p, k (with a G1/G2/G3 variant first), or k1..k6.
    #[arg(required = true)]
    params: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Edges)]
    format: Format,
    /// Write the graph here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write the JSON descriptor; defaults to OUT with `.json` appended.
    #[arg(long)]
    sidecar: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    SubdividedStar,
    ReducedSubdividedStar,
    FamilyT,
    TightTreePair,
    SubcubicGp,
    StarPlusEdge,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    G6,
    Edges,
}

#[derive(Args)]
struct AuditCommon {
    /// Fixed degree bound; defaults to max(3, Δ(G)) per instance.
    #[arg(long)]
    delta: Option<usize>,
    /// Directory for the CSV and summary JSON.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Worker threads (overrides IOCODE_WORKERS).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum AuditTarget {
    /// All twin-free trees with 5 ≤ n ≤ N_MAX.
    Trees {
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[command(flatten)]
        common: AuditCommon,
    },
    /// All connected twin-free 4-cycle-free graphs with 5 ≤ n ≤ N_MAX, or a seeded sample.
    Graphs {
        #[arg(long, default_value_t = 7)]
        n_max: usize,
        /// Sample this many random graphs of order N_MAX instead of enumerating.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: AuditCommon,
    },
    /// Exact values of the tight families.
    Families {
        #[arg(long, default_value_t = 5)]
        delta_max: usize,
        #[arg(long, default_value_t = 7)]
        p_max: usize,
        /// Largest p for which the cycle family is solved exactly.
        #[arg(long, default_value_t = 3)]
        exact_p_max: usize,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Ok,
    /// A checked property failed.
    Violation,
}

fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).context("reading graph from stdin")?
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    parse_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

/// CODE is a file of vertex indices, or an inline list separated by commas or spaces.
fn read_code(arg: &str, n: usize) -> anyhow::Result<VertexSet> {
    let text = if Path::new(arg).is_file() {
        fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    } else {
        arg.to_string()
    };
    let mut vertices = Vec::new();
    for line in text.lines() {
        let content = line.split('#').next().unwrap_or("");
        for tok in content
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            vertices.push(
                tok.parse::<usize>()
                    .with_context(|| format!("bad vertex index {tok:?}"))?,
            );
        }
    }
    Ok(VertexSet::from_vertices(n, vertices)?)
}

fn print_json(value: &serde_json::Value) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn cmd_verify(graph: &Path, code: &str) -> anyhow::Result<Outcome> {
    let g = read_graph(graph)?;
    let s = read_code(code, g.order())?;
    let verdict = is_io_code(&g, &s)?;
    print_json(&serde_json::to_value(&verdict)?)?;
    Ok(if verdict.ok { Outcome::Ok } else { Outcome::Violation })
}

fn cmd_solve(graph: &Path, budget: Option<usize>, oracle: bool) -> anyhow::Result<Outcome> {
    let g = read_graph(graph)?;
    let start = Instant::now();
    if let Some(k) = budget {
        let found = solve_with_budget(&g, k)?;
        return print_json(&json!({
            "budget": k,
            "feasible": found.is_some(),
            "code": found,
            "wall_time_ms": start.elapsed().as_millis(),
        }))
        .map(|_| Outcome::Ok);
    }
    let res = if oracle { solve_oracle(&g)? } else { solve(&g)? };
    print_json(&json!({
        "gamma": res.gamma,
        "code": res.code,
        "nodes_explored": res.nodes_explored,
        "method": res.method,
        "wall_time_ms": start.elapsed().as_millis(),
    }))?;
    Ok(Outcome::Ok)
}

fn cmd_construct(graph: &Path, delta: Option<usize>) -> anyhow::Result<Outcome> {
    let g = read_graph(graph)?;
    let delta = delta.unwrap_or_else(|| g.max_degree().unwrap_or(0).max(3));
    let (code, trace) = if g.is_tree() {
        construct_tree_code(&g, delta)?
    } else {
        construct_graph_code(&g, delta)?
    };
    let status = check_bound_for(&g, code.len(), delta);
    print_json(&json!({
        "code": code,
        "size": code.len(),
        "n": g.order(),
        "delta": delta,
        "bound_status": status,
        "trace": trace,
    }))?;
    Ok(if status == BoundStatus::Violation {
        Outcome::Violation
    } else {
        Outcome::Ok
    })
}

fn param(params: &[String], i: usize, name: &str) -> anyhow::Result<usize> {
    let raw = params.get(i).with_context(|| format!("missing parameter {name}"))?;
    raw.parse()
        .with_context(|| format!("parameter {name} must be a non-negative integer, got {raw:?}"))
}

fn generate(family: Family, params: &[String]) -> anyhow::Result<(Graph, FamilySpec)> {
    let expect = |count: usize| -> anyhow::Result<()> {
        if params.len() != count {
            bail!("expected {count} parameter(s), got {}", params.len());
        }
        Ok(())
    };
    Ok(match family {
        Family::SubdividedStar => {
            expect(1)?;
            gen_subdivided_star(param(params, 0, "delta")?)?
        }
        Family::ReducedSubdividedStar => {
            expect(1)?;
            gen_reduced_subdivided_star(param(params, 0, "delta")?)?
        }
        Family::TightTreePair => {
            expect(1)?;
            gen_tight_tree_pair(param(params, 0, "delta")?)?
        }
        Family::SubcubicGp => {
            expect(1)?;
            gen_subcubic_gp(param(params, 0, "p")?)?
        }
        Family::StarPlusEdge => {
            expect(2)?;
            let variant: StarEdge = params[0].parse()?;
            gen_star_plus_edge(variant, param(params, 1, "k")?)?
        }
        Family::FamilyT => {
            expect(6)?;
            let mut k = [0usize; 6];
            for (i, slot) in k.iter_mut().enumerate() {
                *slot = param(params, i, &format!("k{}", i + 1))?;
            }
            build_family_tree(AttachmentVector::new(k)?)
        }
    })
}

fn cmd_generate(args: &GenerateArgs) -> anyhow::Result<Outcome> {
    let (g, spec) = generate(args.family, &args.params)?;
    let text = match args.format {
        Format::G6 => format!("{}\n", write_graph6(&g)),
        Format::Edges => write_edge_list(&g),
    };
    let sidecar = args.sidecar.clone().or_else(|| {
        args.out.as_ref().map(|o| {
            let mut p = o.clone().into_os_string();
            p.push(".json");
            PathBuf::from(p)
        })
    });
    match &args.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    if let Some(path) = sidecar {
        let json = serde_json::to_string_pretty(&spec)?;
        fs::write(&path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(Outcome::Ok)
}

fn write_report(report: &AuditReport, out_dir: Option<&Path>) -> anyhow::Result<Outcome> {
    let summary = serde_json::to_value(&report.summary)?;
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let kind = &report.summary.kind;
        fs::write(dir.join(format!("{kind}.csv")), report.to_csv())?;
        fs::write(
            dir.join(format!("{kind}_summary.json")),
            serde_json::to_string_pretty(&summary)? + "\n",
        )?;
    }
    print_json(&summary)?;
    Ok(if report.summary.violations == 0 {
        Outcome::Ok
    } else {
        Outcome::Violation
    })
}

fn cmd_audit(target: &AuditTarget) -> anyhow::Result<Outcome> {
    match target {
        AuditTarget::Trees { n_max, common } => {
            let opts = AuditOptions {
                delta: common.delta,
                workers: common.workers,
            };
            write_report(&audit_trees(*n_max, opts)?, common.out_dir.as_deref())
        }
        AuditTarget::Graphs {
            n_max,
            sample,
            seed,
            common,
        } => {
            let opts = AuditOptions {
                delta: common.delta,
                workers: common.workers,
            };
            let report = match sample {
                Some(count) => audit_graphs_sampled(*n_max, *count, *seed, opts)?,
                None => audit_graphs(*n_max, opts)?,
            };
            write_report(&report, common.out_dir.as_deref())
        }
        AuditTarget::Families {
            delta_max,
            p_max,
            exact_p_max,
            out_dir,
        } => {
            let report = verify_tight_families(*delta_max, *p_max, *exact_p_max)?;
            let value = serde_json::to_value(&report)?;
            if let Some(dir) = out_dir {
                fs::create_dir_all(dir)?;
                fs::write(
                    dir.join("families_summary.json"),
                    serde_json::to_string_pretty(&value)? + "\n",
                )?;
            }
            print_json(&value)?;
            Ok(if report.all_ok { Outcome::Ok } else { Outcome::Violation })
        }
    }
}

fn cmd_signature(graph: &Path, code: &str, as_json: bool) -> anyhow::Result<Outcome> {
    let g = read_graph(graph)?;
    let s = read_code(code, g.order())?;
    let sigs = signatures(&g, &s)?;
    if as_json {
        print_json(&serde_json::to_value(&sigs)?)?;
    } else {
        for (v, sig) in sigs.iter().enumerate() {
            let members: Vec<String> = sig.iter().map(|x| x.to_string()).collect();
            println!("{v}\t{{{}}}", members.join(", "));
        }
    }
    Ok(Outcome::Ok)
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Verify { graph, code } => cmd_verify(graph, code),
        Command::Solve { graph, budget, oracle } => cmd_solve(graph, *budget, *oracle),
        Command::Construct { graph, delta } => cmd_construct(graph, *delta),
        Command::Generate(args) => cmd_generate(args),
        Command::Audit { target } => cmd_audit(target),
        Command::Signature { graph, code, json } => cmd_signature(graph, code, *json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
