use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use spindle::dag::dag_spindle_counted;
use spindle::digraph::check_witness;
use spindle::disjoint::UndirectedGraph;
use spindle::fpt::{solve_fixed_lengths_with, solve_total_length_counted, FixedOptions};
use spindle::generators::{
    gen_3dm, gen_hampath_fixed, gen_hampath_total, gen_longest_path, gen_triangle_partition, GeneratedInstance,
    ThreeDMInstance,
};
use spindle::oracle::{Oracle, DEFAULT_GUARD};
use spindle::poly::max_k_for_ell_counted;
use spindle::{parse_digraph, serialize_digraph, Counter, Digraph, Mode, SpindleSpec, SpindleWitness};

/// Spindle subdivisions in digraphs: solvers, exhaustive oracle and instance generators.
///
/// Every command prints one JSON document `{answer, witness?, stats}`.
/// Exit status: 0 when decided, 2 on usage or input errors, 3 when the
/// exhaustive oracle refuses an instance above its size guard.
#[derive(Parser)]
#[command(name = "spindle", version)]
struct Cli {
    /// Seed for the randomised colour-coding phase.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Largest vertex count the exhaustive oracle accepts.
    #[arg(long, global = true, env = "SPINDLE_GUARD", default_value_t = DEFAULT_GUARD)]
    guard: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Solve(Solve),
    /// Exhaustive search for a spindle with the given path lengths.
    Oracle {
        /// Comma-separated path lengths.
        #[arg(long, value_delimiter = ',', required = true)]
        lengths: Vec<usize>,
        /// Require exact lengths instead of lower bounds.
        #[arg(long)]
        exact: bool,
        file: PathBuf,
    },
    #[command(subcommand)]
    Gen(Gen),
    /// Check a witness (bare, or a solver's output document) against a spindle.
    Validate {
        #[arg(long, value_delimiter = ',', required = true)]
        spec: Vec<usize>,
        #[arg(long)]
        exact: bool,
        file: PathBuf,
        witness: PathBuf,
    },
}

#[derive(Subcommand)]
enum Solve {
    /// Largest k with a (k x ell)-spindle subdivision.
    MaxK {
        #[arg(long)]
        ell: usize,
        /// Use the exhaustive oracle; required for ell >= 4.
        #[arg(long)]
        oracle: bool,
        file: PathBuf,
    },
    /// 2-spindle subdivision by total length or by two lower bounds.
    TwoSpindle(TwoSpindle),
    /// (k x ell)-spindle subdivision in an acyclic digraph.
    Dag {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        ell: usize,
        file: PathBuf,
    },
}

#[derive(Args)]
struct TwoSpindle {
    #[arg(long, conflicts_with_all = ["l1", "l2"], required_unless_present_all = ["l1", "l2"])]
    total: Option<usize>,
    #[arg(long, requires = "l2")]
    l1: Option<usize>,
    #[arg(long, requires = "l1")]
    l2: Option<usize>,
    /// Colourings per length pair in the short phase.
    #[arg(long)]
    trials: Option<usize>,
    file: PathBuf,
}

#[derive(Args)]
struct Out {
    /// Output digraph file; the sidecar goes to `<out>.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Gen {
    /// k - 1 hub pairs around a longest-path instance.
    LongestPath {
        #[arg(long)]
        k: usize,
        file: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// 3-dimensional matching to (k* x ell)-spindles. FILE: `n m` then `m` lines `a b c`.
    #[command(name = "3dm")]
    ThreeDm {
        #[arg(long, default_value_t = 4)]
        ell: usize,
        /// Comma-separated triple indices of a perfect matching to plant.
        #[arg(long, value_delimiter = ',', conflicts_with = "plant")]
        solution: Option<Vec<usize>>,
        /// Plant a perfect matching found by exhaustive search, if one exists.
        #[arg(long)]
        plant: bool,
        file: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Hamiltonian (s,t)-path to total-length 2-spindles.
    HampathTotal {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        file: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Hamiltonian (s,t)-path to (l1, n-1)-spindles.
    HampathFixed {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        l1: usize,
        file: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Tripartite triangle partition to disjoint 2-spindles. FILE: `n m`, `n` class labels, `m` edges.
    Triangles {
        file: PathBuf,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Serialize)]
struct Stats {
    elapsed_ms: u64,
    explored: u64,
}

#[derive(Serialize)]
struct Report {
    answer: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<SpindleWitness>,
    stats: Stats,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> anyhow::Result<Digraph> {
    parse_digraph(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// Non-comment lines split into integers.
fn int_lines(text: &str) -> anyhow::Result<Vec<Vec<usize>>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split_whitespace().map(|t| t.parse::<usize>().with_context(|| format!("bad integer {t:?}"))).collect()
        })
        .collect()
}

fn parse_3dm(text: &str) -> anyhow::Result<ThreeDMInstance> {
    let lines = int_lines(text)?;
    let Some([n, m]) = lines.first().and_then(|h| <[usize; 2]>::try_from(h.as_slice()).ok()) else {
        bail!("expected a header `n m`");
    };
    if lines.len() != m + 1 {
        bail!("expected {m} triples, found {}", lines.len() - 1);
    }
    let triples = lines[1..]
        .iter()
        .map(|l| match l.as_slice() {
            &[a, b, c] => Ok((a, b, c)),
            _ => bail!("triple lines need three integers"),
        })
        .collect::<anyhow::Result<_>>()?;
    Ok(ThreeDMInstance::new(n, triples)?)
}

fn parse_tripartite(text: &str) -> anyhow::Result<(UndirectedGraph, Vec<usize>)> {
    let lines = int_lines(text)?;
    let Some([n, m]) = lines.first().and_then(|h| <[usize; 2]>::try_from(h.as_slice()).ok()) else {
        bail!("expected a header `n m`");
    };
    let classes = lines.get(1).cloned().unwrap_or_default();
    if classes.len() != n {
        bail!("expected a line of {n} class labels");
    }
    if lines.len() != m + 2 {
        bail!("expected {m} edges, found {}", lines.len().saturating_sub(2));
    }
    let edges = lines[2..]
        .iter()
        .map(|l| match l.as_slice() {
            &[a, b] => Ok((a, b)),
            _ => bail!("edge lines need two integers"),
        })
        .collect::<anyhow::Result<_>>()?;
    Ok((UndirectedGraph::new(n, edges)?, classes))
}

fn write_instance(inst: &GeneratedInstance, out: &Path) -> anyhow::Result<Value> {
    fs::write(out, serialize_digraph(&inst.digraph)).with_context(|| format!("writing {}", out.display()))?;
    let mut sidecar = out.as_os_str().to_owned();
    sidecar.push(".json");
    let sidecar = PathBuf::from(sidecar);
    fs::write(&sidecar, serde_json::to_string_pretty(inst)?)
        .with_context(|| format!("writing {}", sidecar.display()))?;
    Ok(json!({
        "digraph": out,
        "sidecar": sidecar,
        "vertices": inst.digraph.vertex_count(),
        "arcs": inst.digraph.arc_count(),
        "target": inst.target,
    }))
}

fn run(cli: Cli) -> anyhow::Result<Report> {
    let start = Instant::now();
    let explored = Counter::new();
    let oracle = Oracle::with_guard(cli.guard);
    let (answer, witness) = match cli.command {
        Command::Solve(Solve::MaxK { ell, oracle: use_oracle, file }) => {
            let g = load(&file)?;
            if use_oracle {
                let k = oracle.max_k(&g, ell)?;
                let w = if k == 0 { None } else { oracle.find(&g, &vec![ell; k], Mode::Subdivision)? };
                (json!(k), w)
            } else if ell <= 3 {
                let (k, w) = max_k_for_ell_counted(&g, ell, &explored)?;
                (json!(k), w)
            } else {
                bail!("no polynomial solver for ell = {ell}; pass --oracle for an exhaustive answer");
            }
        }
        Command::Solve(Solve::TwoSpindle(args)) => {
            let g = load(&args.file)?;
            let w = match (args.total, args.l1, args.l2) {
                (Some(total), _, _) => solve_total_length_counted(&g, total, &explored)?,
                (None, Some(l1), Some(l2)) => {
                    let opts = FixedOptions { seed: cli.seed, trials: args.trials };
                    solve_fixed_lengths_with(&g, l1, l2, &opts, &explored)?
                }
                _ => bail!("pass --total, or both --l1 and --l2"),
            };
            (json!(w.is_some()), w)
        }
        Command::Solve(Solve::Dag { k, ell, file }) => {
            let w = dag_spindle_counted(&load(&file)?, k, ell, &explored)?;
            (json!(w.is_some()), w)
        }
        Command::Oracle { lengths, exact, file } => {
            let mode = if exact { Mode::ExactSubgraph } else { Mode::Subdivision };
            let w = oracle.find(&load(&file)?, &lengths, mode)?;
            (json!(w.is_some()), w)
        }
        Command::Validate { spec, exact, file, witness } => {
            let g = load(&file)?;
            let mode = if exact { Mode::ExactSubgraph } else { Mode::Subdivision };
            let spec = SpindleSpec::new(spec, mode)?;
            let doc: Value = serde_json::from_str(&read(&witness)?).context("witness is not JSON")?;
            let doc = doc.get("witness").cloned().unwrap_or(doc);
            let w: SpindleWitness = serde_json::from_value(doc).context("witness has the wrong shape")?;
            match check_witness(&g, &spec, &w) {
                Ok(()) => (json!(true), None),
                Err(defect) => (json!({ "valid": false, "defect": format!("{defect:?}") }), None),
            }
        }
        Command::Gen(gen) => {
            let (inst, out) = match gen {
                Gen::LongestPath { k, file, out } => (gen_longest_path(&load(&file)?, k)?, out),
                Gen::ThreeDm { ell, solution, plant, file, out } => {
                    let inst = parse_3dm(&read(&file)?).with_context(|| format!("parsing {}", file.display()))?;
                    let found = if plant { inst.find_solution() } else { solution };
                    (gen_3dm(&inst, ell, found.as_deref())?, out)
                }
                Gen::HampathTotal { s, t, file, out } => (gen_hampath_total(&load(&file)?, s, t)?, out),
                Gen::HampathFixed { s, t, l1, file, out } => (gen_hampath_fixed(&load(&file)?, s, t, l1)?, out),
                Gen::Triangles { file, out } => {
                    let (g, classes) =
                        parse_tripartite(&read(&file)?).with_context(|| format!("parsing {}", file.display()))?;
                    (gen_triangle_partition(&g, &classes)?, out)
                }
            };
            (write_instance(&inst, &out.out)?, None)
        }
    };
    Ok(Report {
        answer,
        witness,
        stats: Stats { elapsed_ms: start.elapsed().as_millis() as u64, explored: explored.get() + oracle.explored() },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(report) => {
            println!("{}", serde_json::to_string(&report).expect("serialisable report"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<spindle::Error>() {
                Some(spindle::Error::GuardExceeded { .. }) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
