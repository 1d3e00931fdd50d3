//! `orp` — command-line front end.
//!
//! Vertices are 1-based on the command line and in JSON, matching the graph
//! file; edge ids are 0-based order of appearance. Every result is a JSON
//! document on stdout. Exit status: 0 ok, 1 domain failure (infeasible,
//! guard tripped), 2 usage or input error.

use std::fmt::Display;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use orp_core::oracle::{
    brute_distances, brute_korp_values, brute_orp_value, brute_path_values, brute_svalue,
    has_two_edge_disjoint_paths,
};
use orp_core::{
    build_detour_table, detour_table, dijkstra_tree, evaluate_worst_case, execute_walk,
    gen_bad_example, gen_random_graph, greedy_strategy, optimal_strategy, parse_graph, read_table,
    solve_orp, solve_pareto, write_graph, write_table, Cost, EdgeId, Graph, KorpSolver,
    OrpSolution, ParetoError, ParseError, RandomGraphParams, RoutingStrategy, Scenario, VertexId,
    Walk, Weight, DEFAULT_FAILURE_CAP, DEFAULT_SCENARIO_BUDGET,
};

#[derive(Parser)]
#[command(
    name = "orp",
    version,
    about = "Online replacement paths under probe-revealed edge failures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArg {
    /// Graph file; `-` reads standard input.
    #[arg(short = 'g', long = "graph")]
    graph: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Single-failure potentials, successors and swap edges for every vertex.
    Solve {
        #[command(flatten)]
        g: GraphArg,
        #[arg(short = 't', long = "dest")]
        t: usize,
        /// Only report this vertex.
        #[arg(long)]
        source: Option<usize>,
        /// Write the detour table with a successor column.
        #[arg(long, conflicts_with = "load_table")]
        save_table: Option<PathBuf>,
        /// Rebuild the solution from a saved table instead of solving.
        #[arg(long)]
        load_table: Option<PathBuf>,
    },
    /// Distances and detour values along the shortest-path tree.
    Svalues {
        #[command(flatten)]
        g: GraphArg,
        #[arg(short = 't', long = "dest")]
        t: usize,
    },
    /// Potentials for up to `k` failures.
    Korp {
        #[command(flatten)]
        g: GraphArg,
        #[arg(short = 't', long = "dest")]
        t: usize,
        #[arg(short = 'k')]
        k: usize,
        #[arg(long)]
        source: Option<usize>,
        /// Largest accepted `k`.
        #[arg(long, default_value_t = DEFAULT_FAILURE_CAP)]
        cap: usize,
    },
    /// Shortest path whose robust length is at most `B`.
    Pareto {
        #[command(flatten)]
        g: GraphArg,
        #[arg(short = 's', long = "source")]
        s: usize,
        #[arg(short = 't', long = "dest")]
        t: usize,
        /// Bound on the robust length: a number or `inf`.
        #[arg(short = 'B', long = "bound")]
        bound: String,
    },
    /// Runs a routing strategy against a failure scenario.
    Simulate(SimulateArgs),
    /// Writes generated graphs in the graph file format.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Brute-force reference computations for small graphs.
    Oracle {
        #[command(subcommand)]
        which: OracleCmd,
    },
    /// Times tree + detour table + single-failure solve on random graphs.
    Bench {
        /// Edge counts, comma separated; `n = m / 4`.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyKind {
    Optimal,
    Greedy,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("scenario").required(true).args(["fail", "worst_case"]))]
struct SimulateArgs {
    #[command(flatten)]
    g: GraphArg,
    #[arg(short = 's', long = "source")]
    s: usize,
    #[arg(short = 't', long = "dest")]
    t: usize,
    #[arg(long, value_enum)]
    strategy: StrategyKind,
    #[arg(short = 'k', default_value_t = 1)]
    k: usize,
    /// Failed edge ids, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    fail: Option<Vec<EdgeId>>,
    /// Search all scenarios of at most `k` failures for the costliest.
    #[arg(long)]
    worst_case: bool,
    /// Largest number of scenarios `--worst-case` may enumerate.
    #[arg(long, default_value_t = DEFAULT_SCENARIO_BUDGET)]
    budget: u64,
}

#[derive(Subcommand)]
enum GenKind {
    /// The instance where greedy routing pays `(2^(k+1) - 1) M + 1`.
    BadExample {
        #[arg(short = 'k')]
        k: usize,
        #[arg(short = 'M')]
        scale: u64,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Seeded random multigraph.
    Random {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'm')]
        m: usize,
        #[arg(long, default_value_t = 100)]
        max_weight: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip the spanning tree that otherwise guarantees connectivity.
        #[arg(long)]
        disconnected: bool,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Same shape as `svalues`, by recomputing each detour from scratch.
    Svalues {
        #[command(flatten)]
        g: GraphArg,
        #[arg(short = 't', long = "dest")]
        t: usize,
    },
    /// Single-failure potentials by path enumeration.
    Orp {
        #[command(flatten)]
        g: GraphArg,
        #[arg(short = 't', long = "dest")]
        t: usize,
        #[arg(long)]
        source: Option<usize>,
    },
    /// k-failure potentials by fixpoint iteration over failure sets.
    Korp {
        #[command(flatten)]
        g: GraphArg,
        #[arg(short = 't', long = "dest")]
        t: usize,
        #[arg(short = 'k')]
        k: usize,
        #[arg(long)]
        source: Option<usize>,
    },
    /// Every simple path with its length and robust length.
    Paths {
        #[command(flatten)]
        g: GraphArg,
        #[arg(short = 's', long = "source")]
        s: usize,
        #[arg(short = 't', long = "dest")]
        t: usize,
    },
    /// Whether two edge-disjoint paths join `s` and `t`.
    Disjoint {
        #[command(flatten)]
        g: GraphArg,
        #[arg(short = 's', long = "source")]
        s: usize,
        #[arg(short = 't', long = "dest")]
        t: usize,
    },
}

struct Failure {
    code: u8,
    err: anyhow::Error,
    /// Printed on stdout despite the failure.
    doc: Option<Value>,
}

type Outcome = Result<Value, Failure>;

fn usage(err: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 2,
        err: err.into(),
        doc: None,
    }
}

fn domain(err: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 1,
        err: err.into(),
        doc: None,
    }
}

/// Integer lengths when every length parses as one, floats otherwise.
enum Loaded {
    Int(Graph<u64>),
    Float(Graph<f64>),
}

macro_rules! with_graph {
    ($loaded:expr, $g:ident => $body:expr) => {
        match $loaded {
            Loaded::Int($g) => $body,
            Loaded::Float($g) => $body,
        }
    };
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .context("reading standard input")
            .map_err(usage)?;
        return Ok(text);
    }
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(usage)
}

fn load_graph(arg: &GraphArg) -> Result<Loaded, Failure> {
    let text = read_input(&arg.graph)?;
    let name = arg.graph.display();
    match parse_graph::<u64>(&text) {
        Ok(g) => Ok(Loaded::Int(g)),
        Err(ParseError::InvalidLength { .. }) => parse_graph::<f64>(&text)
            .map(Loaded::Float)
            .with_context(|| format!("parsing {name}"))
            .map_err(usage),
        Err(e) => Err(usage(anyhow!(e).context(format!("parsing {name}")))),
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(usage),
        None => io::stdout()
            .write_all(text.as_bytes())
            .context("writing output")
            .map_err(usage),
    }
}

/// 1-based command-line vertex to internal id.
fn vertex<W: Weight>(g: &Graph<W>, x: usize, flag: &str) -> Result<VertexId, Failure> {
    if x == 0 || x > g.n() {
        return Err(usage(anyhow!(
            "{flag} {x} is not a vertex (expected 1..={})",
            g.n()
        )));
    }
    Ok(x - 1)
}

fn num<W: Display>(w: W) -> Value {
    let s = w.to_string();
    serde_json::from_str(&s).unwrap_or(Value::String(s))
}

fn cost<W: Weight>(c: Cost<W>) -> Value {
    match c {
        Cost::Finite(w) => num(w),
        Cost::Infinite => Value::String("inf".into()),
    }
}

fn one_based(x: Option<VertexId>) -> Value {
    x.map_or(Value::Null, |v| json!(v + 1))
}

fn edge(e: Option<EdgeId>) -> Value {
    e.map_or(Value::Null, |e| json!(e))
}

fn selected(n: usize, source: Option<VertexId>) -> Vec<VertexId> {
    match source {
        Some(s) => vec![s],
        None => (0..n).collect(),
    }
}

/// The common `solve` / `korp` document.
fn potentials<W: Weight>(
    t: VertexId,
    y: &[Cost<W>],
    successor: &[Option<VertexId>],
    successor_edge: &[Option<EdgeId>],
    swap: impl Fn(VertexId) -> Option<EdgeId>,
    source: Option<VertexId>,
) -> Value {
    let vertices: Vec<Value> = selected(y.len(), source)
        .into_iter()
        .map(|x| {
            json!({
                "id": x + 1,
                "y": cost(y[x]),
                "successor": one_based(successor[x]),
                "successorEdge": edge(successor_edge[x]),
                "swapEdge": edge(swap(x)),
            })
        })
        .collect();
    json!({
        "dest": t + 1,
        "vertices": vertices,
        "y": y.iter().map(|&c| cost(c)).collect::<Vec<_>>(),
    })
}

fn cmd_solve<W: Weight>(
    g: &Graph<W>,
    t: usize,
    source: Option<usize>,
    save: Option<&Path>,
    load: Option<&Path>,
) -> Outcome {
    let t = vertex(g, t, "-t")?;
    let source = source.map(|s| vertex(g, s, "--source")).transpose()?;
    let (dt, sol) = match load {
        Some(path) => {
            let loaded = read_table(g, &read_input(path)?)
                .with_context(|| format!("loading {}", path.display()))
                .map_err(usage)?;
            if loaded.table.dest() != t {
                return Err(usage(anyhow!(
                    "table is for destination {}, not {}",
                    loaded.table.dest() + 1,
                    t + 1
                )));
            }
            let succ = loaded
                .successor_edge
                .ok_or_else(|| usage(anyhow!("table has no successor column")))?;
            let sol = OrpSolution::from_successors(g, &loaded.table, succ).map_err(usage)?;
            (loaded.table, sol)
        }
        None => {
            let dt = detour_table(g, t);
            let sol = solve_orp(g, &dt);
            (dt, sol)
        }
    };
    if let Some(path) = save {
        write_output(Some(path), &write_table(&dt, Some(&sol.successor_edge)))?;
    }
    Ok(potentials(
        t,
        &sol.y,
        &sol.successor,
        &sol.successor_edge,
        |x| dt.swap_edge(x),
        source,
    ))
}

fn svalue_doc<W: Weight>(
    t: VertexId,
    dstar: &[Cost<W>],
    parent_edge: &[Option<EdgeId>],
    svalue: impl Fn(VertexId) -> Cost<W>,
    swap: impl Fn(VertexId) -> Option<EdgeId>,
) -> Value {
    let vertices: Vec<Value> = (0..dstar.len())
        .map(|x| {
            json!({
                "id": x + 1,
                "dstar": cost(dstar[x]),
                "parentEdge": edge(parent_edge[x]),
                "svalue": cost(svalue(x)),
                "swapEdge": edge(swap(x)),
            })
        })
        .collect();
    json!({ "dest": t + 1, "vertices": vertices })
}

fn cmd_svalues<W: Weight>(g: &Graph<W>, t: usize) -> Outcome {
    let t = vertex(g, t, "-t")?;
    let dt = detour_table(g, t);
    let dstar: Vec<Cost<W>> = (0..g.n()).map(|x| dt.dstar(x)).collect();
    Ok(svalue_doc(
        t,
        &dstar,
        &dt.tree().parent_edge,
        |x| dt.svalue(x),
        |x| dt.swap_edge(x),
    ))
}

fn cmd_korp<W: Weight>(
    g: &Graph<W>,
    t: usize,
    k: usize,
    source: Option<usize>,
    cap: usize,
) -> Outcome {
    let t = vertex(g, t, "-t")?;
    let source = source.map(|s| vertex(g, s, "--source")).transpose()?;
    let solver = KorpSolver::new(g, t).map_err(usage)?.with_cap(cap);
    let sol = solver.solve(k).map_err(domain)?;
    let mut doc = potentials(
        t,
        &sol.yk,
        &sol.successor,
        &sol.successor_k,
        |_| None,
        source,
    );
    doc["k"] = json!(k);
    Ok(doc)
}

fn cmd_pareto<W: Weight>(g: &Graph<W>, s: usize, t: usize, bound: &str) -> Outcome {
    let s = vertex(g, s, "-s")?;
    let t = vertex(g, t, "-t")?;
    let bound: Cost<W> = bound
        .parse()
        .map_err(|e: String| usage(anyhow!("-B: {e}")))?;
    let dt = detour_table(g, t);
    match solve_pareto(g, s, t, bound, &dt) {
        Ok(p) => Ok(json!({
            "feasible": true,
            "length": num(p.length),
            "robustLength": cost(p.robust_length),
            "path": p.path,
        })),
        Err(e @ (ParetoError::BoundTooTight | ParetoError::Unreachable { .. })) => Err(Failure {
            doc: Some(json!({ "feasible": false })),
            ..domain(e)
        }),
        Err(e) => Err(domain(e)),
    }
}

fn walk_doc<W: Weight>(walk: &Walk<W>) -> Value {
    let steps: Vec<Value> = walk
        .steps
        .iter()
        .map(|st| json!({ "from": st.from + 1, "edge": st.edge, "to": st.to + 1, "failed": st.failed }))
        .collect();
    json!({
        "steps": steps,
        "totalCost": cost(walk.total_cost),
        "probedFailures": walk.probed_failures,
        "stranded": walk.stranded,
    })
}

fn run_simulation<W: Weight, R: RoutingStrategy>(
    g: &Graph<W>,
    strategy: &R,
    a: &SimulateArgs,
) -> Outcome {
    let s = vertex(g, a.s, "-s")?;
    let t = vertex(g, a.t, "-t")?;
    let scenario = match &a.fail {
        Some(list) => {
            if list.len() > a.k {
                return Err(usage(anyhow!(
                    "--fail lists {} edges but -k is {}",
                    list.len(),
                    a.k
                )));
            }
            Scenario::new(g, list.iter().copied()).map_err(usage)?
        }
        None => {
            evaluate_worst_case(g, strategy, s, t, a.k, a.budget)
                .map_err(domain)?
                .scenario
        }
    };
    let walk = execute_walk(g, strategy, s, t, &scenario).map_err(domain)?;
    let mut doc = walk_doc(&walk);
    doc["source"] = json!(s + 1);
    doc["dest"] = json!(t + 1);
    doc["k"] = json!(a.k);
    doc["scenario"] = json!(scenario.failed().as_slice());
    doc["worstCase"] = json!(a.worst_case);
    Ok(doc)
}

fn cmd_simulate<W: Weight>(g: &Graph<W>, a: &SimulateArgs) -> Outcome {
    let t = vertex(g, a.t, "-t")?;
    let mut doc = match a.strategy {
        StrategyKind::Optimal => {
            let strategy = optimal_strategy(g, t, a.k).map_err(domain)?;
            run_simulation(g, &strategy, a)?
        }
        StrategyKind::Greedy => run_simulation(g, &greedy_strategy(g, t), a)?,
    };
    doc["strategy"] = json!(match a.strategy {
        StrategyKind::Optimal => "optimal",
        StrategyKind::Greedy => "greedy",
    });
    Ok(doc)
}

fn cmd_gen(kind: &GenKind) -> Result<(), Failure> {
    match kind {
        GenKind::BadExample { k, scale, output } => {
            let ex = gen_bad_example(*k, *scale).map_err(usage)?;
            let text = format!(
                "c bad example k={k} M={scale}: source {} dest {}\n{}",
                ex.s + 1,
                ex.t + 1,
                write_graph(&ex.graph)
            );
            write_output(output.as_deref(), &text)
        }
        GenKind::Random {
            n,
            m,
            max_weight,
            seed,
            disconnected,
            output,
        } => {
            let g = gen_random_graph(RandomGraphParams {
                n: *n,
                m: *m,
                max_weight: *max_weight,
                seed: *seed,
                connected: !disconnected,
            })
            .map_err(usage)?;
            write_output(output.as_deref(), &write_graph(&g))
        }
    }
}

fn cmd_oracle(which: &OracleCmd) -> Outcome {
    match which {
        OracleCmd::Svalues { g, t } => with_graph!(load_graph(g)?, g => {
            let t = vertex(&g, *t, "-t")?;
            let parent_edge = dijkstra_tree(&g, t).parent_edge;
            let dstar = brute_distances(&g, t);
            let svalue = |x: VertexId| match parent_edge[x] {
                Some(e) => brute_svalue(&g, t, x, e),
                None => dstar[x],
            };
            Ok(svalue_doc(t, &dstar, &parent_edge, svalue, |_| None))
        }),
        OracleCmd::Orp { g, t, source } => with_graph!(load_graph(g)?, g => {
            let t = vertex(&g, *t, "-t")?;
            let source = source.map(|s| vertex(&g, s, "--source")).transpose()?;
            let y = (0..g.n())
                .map(|s| brute_orp_value(&g, s, t))
                .collect::<Result<Vec<_>, _>>()
                .map_err(domain)?;
            let none = vec![None; g.n()];
            Ok(potentials(t, &y, &none, &none, |_| None, source))
        }),
        OracleCmd::Korp { g, t, k, source } => with_graph!(load_graph(g)?, g => {
            let t = vertex(&g, *t, "-t")?;
            let source = source.map(|s| vertex(&g, s, "--source")).transpose()?;
            let y = brute_korp_values(&g, t, *k).map_err(domain)?;
            let none = vec![None; g.n()];
            let mut doc = potentials(t, &y, &none, &none, |_| None, source);
            doc["k"] = json!(k);
            Ok(doc)
        }),
        OracleCmd::Paths { g, s, t } => with_graph!(load_graph(g)?, g => {
            let s = vertex(&g, *s, "-s")?;
            let t = vertex(&g, *t, "-t")?;
            let paths: Vec<Value> = brute_path_values(&g, s, t)
                .map_err(domain)?
                .into_iter()
                .map(|(path, val, len)| json!({ "path": path, "robustLength": cost(val), "length": num(len) }))
                .collect();
            Ok(json!({ "source": s + 1, "dest": t + 1, "paths": paths }))
        }),
        OracleCmd::Disjoint { g, s, t } => with_graph!(load_graph(g)?, g => {
            let s = vertex(&g, *s, "-s")?;
            let t = vertex(&g, *t, "-t")?;
            Ok(json!({ "source": s + 1, "dest": t + 1, "twoEdgeDisjoint": has_two_edge_disjoint_paths(&g, s, t) }))
        }),
    }
}

fn millis(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

fn cmd_bench(sizes: &[usize], seed: u64) -> Outcome {
    let mut runs = Vec::with_capacity(sizes.len());
    for &m in sizes {
        let n = (m / 4).max(2);
        let g = gen_random_graph(RandomGraphParams {
            n,
            m: m.max(n - 1),
            max_weight: 1_000_000,
            seed,
            connected: true,
        })
        .map_err(usage)?;
        let start = Instant::now();
        let spt = dijkstra_tree(&g, 0);
        let tree_ms = millis(start);
        let mark = Instant::now();
        let dt = build_detour_table(&g, spt);
        let detour_ms = millis(mark);
        let mark = Instant::now();
        let sol = solve_orp(&g, &dt);
        let orp_ms = millis(mark);
        let stats = dt.stats();
        runs.push(json!({
            "m": g.m(),
            "n": n,
            "millis": millis(start),
            "treeMillis": tree_ms,
            "detourMillis": detour_ms,
            "orpMillis": orp_ms,
            "heapPops": sol.heap_pops,
            "contractions": stats.contractions,
            "finite": sol.y.iter().filter(|c| c.is_finite()).count(),
        }));
    }
    Ok(json!({ "seed": seed, "runs": runs }))
}

fn print_json(doc: &Value) {
    let mut out = io::stdout().lock();
    let _ = serde_json::to_writer(&mut out, doc);
    let _ = writeln!(out);
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Solve {
            g,
            t,
            source,
            save_table,
            load_table,
        } => with_graph!(load_graph(g)?, g => {
            cmd_solve(&g, *t, *source, save_table.as_deref(), load_table.as_deref())
        }),
        Command::Svalues { g, t } => with_graph!(load_graph(g)?, g => cmd_svalues(&g, *t)),
        Command::Korp {
            g,
            t,
            k,
            source,
            cap,
        } => {
            with_graph!(load_graph(g)?, g => cmd_korp(&g, *t, *k, *source, *cap))
        }
        Command::Pareto { g, s, t, bound } => {
            with_graph!(load_graph(g)?, g => cmd_pareto(&g, *s, *t, bound))
        }
        Command::Simulate(a) => with_graph!(load_graph(&a.g)?, g => cmd_simulate(&g, a)),
        Command::Gen { kind } => cmd_gen(kind).map(|()| Value::Null),
        Command::Oracle { which } => cmd_oracle(which),
        Command::Bench { sizes, seed } => cmd_bench(sizes, *seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Value::Null) => ExitCode::SUCCESS,
        Ok(doc) => {
            print_json(&doc);
            ExitCode::SUCCESS
        }
        Err(f) => {
            if let Some(doc) = &f.doc {
                print_json(doc);
            }
            eprintln!("orp: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}
