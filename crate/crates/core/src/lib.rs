//! Online replacement paths on undirected weighted multigraphs.
//!
//! A traveller heads for a destination `t` knowing the graph but not which
//! edges have failed; a failure is discovered only by trying to cross the
//! edge. The crate computes worst-case-optimal routing for one failure
//! ([`solve_orp`]) and for up to `k` failures ([`solve_korp`]), the detour
//! tables they rest on, a robustness-constrained shortest path
//! ([`solve_pareto`]), a strategy simulator, and brute-force oracles.
//!
//! Everything is generic over the edge-length scalar; [`IntGraph`] and
//! [`FloatGraph`] name the common instantiations.
//!
//! ```
//! use orp_core::{detour_table, parse_graph, solve_orp, Cost, IntGraph};
//!
//! let g: IntGraph = parse_graph("p orp 3 3\ne 1 3 1\ne 1 2 1\ne 2 3 1\n").unwrap();
//! let dt = detour_table(&g, 2);
//! let sol = solve_orp(&g, &dt);
//! assert_eq!(sol.y, vec![Cost::Finite(2), Cost::Finite(2), Cost::Finite(0)]);
//! ```

pub mod cost;
pub mod detour;
pub mod graph;
mod heap;
pub mod korp;
pub mod oracle;
pub mod orp;
pub mod pareto;
pub mod simulate;

pub use cost::{Cost, Weight};
pub use detour::{
    build_detour_table, detour_table, read_table, write_table, DetourError, DetourStats,
    DetourTable, LoadedTable, TableError,
};
pub use graph::{
    dijkstra_tree, parse_graph, write_graph, Edge, EdgeId, EdgeMask, EdgeSet, Graph, GraphError,
    GraphView, ParseError, ShortestPathTree, VertexId,
};
pub use korp::{
    optimal_strategy, solve_korp, Decision, KorpError, KorpSolution, KorpSolver, OptimalStrategy,
    RoutingStrategy, StrategyError, DEFAULT_FAILURE_CAP,
};
pub use orp::{nominal_path, robust_length, solve_orp, OrpError, OrpSolution, PathError};
pub use pareto::{solve_pareto, ParetoError, ParetoPath};
pub use simulate::{
    evaluate_worst_case, execute_walk, gen_bad_example, gen_random_graph, greedy_strategy,
    BadExample, GenError, GreedyStrategy, RandomGraphParams, Scenario, SimulateError, Step, Walk,
    WorstCase, DEFAULT_SCENARIO_BUDGET,
};

pub type IntGraph = Graph<u64>;
pub type IntCost = Cost<u64>;
pub type IntDetourTable = DetourTable<u64>;
pub type IntOrpSolution = OrpSolution<u64>;
pub type FloatGraph = Graph<f64>;
pub type FloatCost = Cost<f64>;
pub type FloatDetourTable = DetourTable<f64>;
pub type FloatOrpSolution = OrpSolution<f64>;
